#pragma once

// Finite-difference and mean-value checks of the positivity properties of
// extremal length along holomorphic disks: torus-affine disks
// mu -> tau0 + mu V, and disks inside the Teichmüller disk of a flat
// surface, mu -> center + direction * mu.
//
// d/dmu d/dmubar is evaluated with the 5-point stencil
//   (f(m+h) + f(m-h) + f(m+ih) + f(m-ih) - 4 f(m)) / (4 h^2)
// and one Richardson level.

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "teich/homology.hpp"
#include "teich/report.hpp"
#include "teich/torus.hpp"

namespace teich::psh {

/// Tolerance ladder.
inline constexpr double kExactTol = 1e-12;
inline constexpr double kClosedFormTol = 1e-9;
inline constexpr double kFiniteDifferenceTol = 1e-6;

/// Disk images are kept in Im tau > kTorusFloor, or |lambda| <= kFlatCeiling.
inline constexpr double kTorusFloor = 0.1;
inline constexpr double kFlatCeiling = 0.9;

struct TorusDisk {
  torus::Point center;
  cplx V;
};

struct FlatDisk {
  std::shared_ptr<const flat::PeriodEngine> engine;
  cplx center;     // lambda at mu = 0
  cplx direction;  // lambda = center + direction * mu
};

class HoloDisk {
 public:
  static HoloDisk torus_affine(torus::Point center, cplx V, double radius);
  static HoloDisk flat_disk(std::shared_ptr<const flat::PeriodEngine> engine, cplx center, cplx direction,
                            double radius);

  double radius() const { return radius_; }
  bool is_torus() const { return std::holds_alternative<TorusDisk>(rule_); }
  const TorusDisk& torus() const { return std::get<TorusDisk>(rule_); }
  const FlatDisk& flat() const { return std::get<FlatDisk>(rule_); }

  /// Throws DomainError outside the closed disk |mu| <= radius.
  torus::Point torus_point(cplx mu) const;
  cplx flat_lambda(cplx mu) const;

  std::string describe() const;

 private:
  HoloDisk(std::variant<TorusDisk, FlatDisk> rule, double radius) : rule_(std::move(rule)), radius_(radius) {}

  std::variant<TorusDisk, FlatDisk> rule_;
  double radius_;
};

enum class FieldKind { ext, log_ext, reciprocal, distance };

/// A real function on Teichmüller space, pulled back along a disk.  On
/// flat disks the foliation is always the vertical foliation of the
/// surface; `foliations` is then ignored and only `weights[0]` is used by
/// the reciprocal field.
struct ScalarField {
  FieldKind kind = FieldKind::ext;
  std::vector<torus::Foliation> foliations;
  std::vector<double> weights;
  double constant = 0.0;
  torus::Point reference{0.0, 1.0};

  static ScalarField ext(const torus::Foliation& f);
  static ScalarField log_ext(const torus::Foliation& f);
  /// rho = -1 / (c + sum_k a_k Ext(F_k)).
  static ScalarField reciprocal(std::vector<torus::Foliation> fs, std::vector<double> weights, double c);
  /// d_T(x0, .), torus only.
  static ScalarField distance(const torus::Point& x0);

  std::string name() const;
};

double evaluate(const ScalarField& field, const HoloDisk& disk, cplx mu);

/// Richardson-extrapolated 5-point estimate of d^2 f / dmu dmubar.
/// Requires h < radius / 10 and |mu0| + h <= radius.
double fd_dbar_d(const ScalarField& field, const HoloDisk& disk, cplx mu0, double h);
/// Unextrapolated stencil, exposed for convergence-order checks.
double fd_dbar_d_raw(const ScalarField& field, const HoloDisk& disk, cplx mu0, double h);
/// Richardson-extrapolated central estimate of df/dmu = (f_x - i f_y) / 2.
cplx fd_d(const ScalarField& field, const HoloDisk& disk, cplx mu0, double h);

/// Default step for a disk: 1e-3 Im tau0 / |V| on the torus, 1e-3 / |direction|
/// on flat disks, capped at radius / 20.
double default_step(const HoloDisk& disk);

/// 25 points of the unit disk, radius <= 1/2: the center and three rings of 8.
std::vector<cplx> default_grid();

/// Random torus-affine disks with Re tau0 in [-1, 1], Im tau0 in [0.5, 2],
/// |V| in [0.1, 1.5] and radius keeping Im tau > kTorusFloor.
std::vector<HoloDisk> random_torus_disks(std::size_t n, std::uint64_t seed);
/// Random disks inside the Teichmüller disk of `engine`'s surface with
/// |center| <= 0.6 and |lambda| <= kFlatCeiling.
std::vector<HoloDisk> random_flat_disks(std::shared_ptr<const flat::PeriodEngine> engine, std::size_t n,
                                        std::uint64_t seed);

VerificationReport verify_log_psh(const torus::Foliation& f, const std::vector<HoloDisk>& disks,
                                  const std::vector<cplx>& grid, double tol = kFiniteDifferenceTol);

struct ReciprocalOptions {
  double tol = kFiniteDifferenceTol;
  std::vector<cplx> grid = default_grid();
};

VerificationReport verify_reciprocal_psh(const std::vector<torus::Foliation>& fs, const std::vector<double>& weights,
                                         double c, const std::vector<HoloDisk>& disks,
                                         const ReciprocalOptions& opts = {});

/// -1/c <= rho < 0 (rho < 0 when c = 0) on an nx x ny grid over
/// [x0, x1] x [y0, y1] in the upper half-plane.
VerificationReport reciprocal_grid_bounds(const std::vector<torus::Foliation>& fs, const std::vector<double>& weights,
                                          double c, double x0, double x1, double y0, double y1, std::size_t nx,
                                          std::size_t ny);

/// Lower bound Ext F + Ext G >= exp(2 d_T(x0, x)) m0 with
/// m0 = min{i(F,H)^2 + i(G,H)^2 : Ext_x0(H) = 1} estimated from `rays`
/// sampled H, tested along `rays` geodesic rays from x0.  Slack is
/// relative; the check also requires m0 > 0.
VerificationReport properness_proxy(const torus::Point& x0, const torus::Foliation& f, const torus::Foliation& g,
                                    std::size_t rays = 512, double tol = 0.0);

struct MeanValueOptions {
  std::vector<double> radii{0.25, 0.5, 1.0};  // fractions of the disk radius
  std::size_t nodes = 64;
  double tol = kFiniteDifferenceTol;
};

/// Sub-mean-value test of d_T(x0, .) on circles centered at each disk's
/// center.  Slack = circle average - center value.
VerificationReport verify_distance_psh(const torus::Point& x0, const std::vector<HoloDisk>& disks,
                                       const MeanValueOptions& opts = {});

/// Circle average minus center value of an arbitrary field, trapezoid rule.
double mean_value_slack(const ScalarField& field, const HoloDisk& disk, double radius, std::size_t nodes);

struct MaxPrincipleOptions {
  std::size_t boundary_nodes = 256;
  double tol = kClosedFormTol;
};

/// Interior grid maximum of Ext(F) must not exceed the boundary-circle
/// maximum.  `epsilon` is the horoball level; the report records how many
/// disks had their boundary inside the horoball and whether the interior
/// followed.
VerificationReport verify_horoball_diskconvex(const torus::Foliation& f, double epsilon,
                                              const std::vector<HoloDisk>& disks, const std::vector<cplx>& grid,
                                              const MaxPrincipleOptions& opts = {});

/// |(log E)_mu|^2 <= E_{mu mubar} / (2E) <= (log E)_{mu mubar} at every
/// grid point, from finite differences.  On torus disks the analytic
/// values of the three terms are additionally required to agree to
/// kClosedFormTol.
VerificationReport verify_currents_inequality(const torus::Foliation& f, const std::vector<HoloDisk>& disks,
                                              const std::vector<cplx>& grid, double tol = kFiniteDifferenceTol);

/// Ext * E_{mu mubar} - 2 |E_mu|^2 >= -tol * scale from finite
/// differences, scale = max(1, E^2 |direction|^2).
VerificationReport verify_strong_positivity_fd(const torus::Foliation& f, const std::vector<HoloDisk>& disks,
                                               const std::vector<cplx>& grid, double tol = kFiniteDifferenceTol);

/// Minsky's inequality over random (tau, F, G), half with integer and half
/// with real weights.
VerificationReport verify_minsky(std::size_t samples, std::uint64_t seed, double tol = kExactTol);

/// Closed-form torus identities over random (tau, F, V): Levi = 2 |eta|^2/|q|
/// and Ext * Levi = 2 |gardiner|^2, relative error.
VerificationReport verify_levi_identity(std::size_t samples, std::uint64_t seed, double tol = kExactTol);
VerificationReport verify_strong_positivity_closed_form(std::size_t samples, std::uint64_t seed,
                                                        double tol = kClosedFormTol);

/// Same quantity from closed-form derivatives along flat disks.
VerificationReport verify_strong_positivity_flat(const std::vector<HoloDisk>& disks, const std::vector<cplx>& grid,
                                                 double tol = kClosedFormTol);

/// Finite-difference Wirtinger derivative of Ext along random disks versus
/// the closed form -int mu' q, relative error.
VerificationReport verify_gardiner(std::size_t samples, std::uint64_t seed, double tol = kFiniteDifferenceTol);

/// j_derivative_check over random (tau0, F, V).
VerificationReport verify_duality(std::size_t samples, std::uint64_t seed, double tol = kFiniteDifferenceTol);

/// Kerckhoff distance: eigen method against half the Poincaré distance.
VerificationReport verify_distance_eigen(std::size_t samples, std::uint64_t seed, double tol = kClosedFormTol);
/// Kerckhoff distance: brute force with the given bound against eigen.
VerificationReport verify_distance_brute(std::size_t samples, std::uint64_t seed, long bound = 100,
                                         double tol = kClosedFormTol);

/// Period-engine consistency on one surface: bilinear Ext against area,
/// Riemann-Hurwitz, Gauss-Bonnet, exact deck antisymmetry of periods,
/// real-period constancy and Ext = t * area under `samples` random shears,
/// and the Teichmüller-disk formula at `samples` random lambda.  Report
/// names are prefixed with `label`.
std::vector<VerificationReport> verify_period_engine(const std::string& label, const flat::FlatSurface& s,
                                                     std::size_t samples, std::uint64_t seed);

}  // namespace teich::psh
