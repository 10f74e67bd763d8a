#pragma once

// Closed-form Teichmüller geometry of the flat torus C/(Z + tau Z).
//
// Foliations are stored homogeneously as the weight pair (a, b): the
// foliation by lines of direction a + b*tau with transverse measure scaled
// so that Ext is degree-2 homogeneous in (a, b).  Dividing any extremal
// length below by b^2 recovers the normalization i(alpha, F) = 1.
//
// Levi forms use the convention L[v, vbar] = d^2/(dlambda dlambdabar) of the
// function restricted to the disk lambda -> tau0 + lambda V, i.e. one quarter
// of the Euclidean Laplacian in lambda.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "teich/report.hpp"

namespace teich {

using cplx = std::complex<double>;

/// Thrown when an input violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace teich

namespace teich::torus {

/// Points with Im(tau) at or below this are rejected.
inline constexpr double kMinImaginaryPart = 1e-12;

class Point {
 public:
  explicit Point(cplx tau);
  Point(double re, double im) : Point(cplx(re, im)) {}

  cplx tau() const { return tau_; }
  double im() const { return tau_.imag(); }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  cplx tau_;
};

/// Measured foliation with canonical sign: b > 0, or b == 0 and a > 0.
class Foliation {
 public:
  Foliation(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }

  /// a + b*z; the leaf direction on C/(Z + z Z).
  cplx direction(cplx z) const { return a_ + b_ * z; }

  friend bool operator==(const Foliation&, const Foliation&) = default;

 private:
  double a_;
  double b_;
};

/// coeff * dz^2 on the torus at `base`.
struct QuadDiff {
  cplx coeff;
  Point base;

  /// L1 norm: |coeff| times the flat area Im(tau).
  double norm() const { return std::abs(coeff) * base.im(); }
};

/// Tangent vector at `base` for the disk lambda -> tau + lambda V.  The
/// associated infinitesimal Beltrami differential is iV/(2 Im tau) dzbar/dz.
struct Tangent {
  Point base;
  cplx V;

  cplx beltrami_coefficient() const { return cplx(0, 1) * V / (2.0 * base.im()); }
};

double intersection(const Foliation& f, const Foliation& g);

double extremal_length(const Point& x, const Foliation& f);

QuadDiff hubbard_masur(const Point& x, const Foliation& f);

double levi_form(const Point& x, const Foliation& f, const Tangent& t);

QuadDiff eta_v(const Point& x, const Foliation& f, const Tangent& t);

/// d/dlambda at 0 of Ext(tau + lambda V, F), equal to -int mu' q_{F,x}.
cplx gardiner_derivative(const Point& x, const Foliation& f, const Tangent& t);

/// Ext * Levi - 2 |d Ext|^2; identically zero on the torus.
double strong_positivity_slack(const Point& x, const Foliation& f, const Tangent& t);

/// Ext(F) Ext(G) - i(F, G)^2.
double minsky_slack(const Point& x, const Foliation& f, const Foliation& g);

enum class DistanceMethod { brute, eigen };

struct DistanceResult {
  double distance = 0.0;
  // Maximizing primitive curve (brute only).  For eigen this is (0, 0).
  long p = 0;
  long q = 0;
};

inline constexpr long kDefaultBruteBound = 100;

/// Teichmüller distance by Kerckhoff's sup of extremal-length ratios.
/// brute: sup over primitive (p, q) with |p|, |q| <= bound.
/// eigen: largest generalized eigenvalue of the pair of binary quadratic
/// forms Q_x2, Q_x1.
DistanceResult teich_distance(const Point& x1, const Point& x2, DistanceMethod method,
                              long bound = kDefaultBruteBound);

inline double teich_distance(const Point& x1, const Point& x2) {
  return teich_distance(x1, x2, DistanceMethod::eigen).distance;
}

/// Half the curvature -1 hyperbolic distance on the upper half-plane.
double half_poincare_distance(const Point& x1, const Point& x2);

/// The map tau -> J_{tau0}(tau): the differential on the fixed torus tau0
/// whose horizontal foliation agrees with that of q_{F,tau}.
QuadDiff j_map(const Point& x0, const Foliation& f, const Point& x);

/// Compares a Richardson-extrapolated central difference of tau -> J(tau)
/// along V with -4 eta_v.  Slack is minus the relative error.
VerificationReport j_derivative_check(const Point& x0, const Foliation& f, const Tangent& t,
                                      double h, double tolerance = 1e-6);

std::string to_string(const Point& x);
std::string to_string(const Foliation& f);

}  // namespace teich::torus
