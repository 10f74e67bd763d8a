#pragma once

// Orientation double cover of a half-translation surface, exact rational
// homology of the cover, and periods of the lifted 1-form.
//
// The cover is realized as a translation surface: sheet 0 carries a copy
// of each polygon P, sheet 1 a copy of -P.  A flip pairing glues sheet 0
// to sheet 1; a translation pairing glues each sheet to itself.  On the
// cover the lifted square root of q is dz on every (possibly negated)
// polygon, and the deck involution is z -> -z between sheets.

#include <complex>
#include <string>
#include <vector>

#include "teich/flat_surface.hpp"
#include "teich/rational.hpp"

namespace teich::flat {

enum class CoverStatus { connected, orientable };

struct DoubleCoverSurface {
  FlatSurface base;
  FlatSurface cover;  // translation surface, 2 * base.num_faces() polygons
  CoverStatus status = CoverStatus::connected;
  /// Base cone points with odd multiple of pi.
  std::vector<int> branch_points;
  /// Deck involution on cover edge classes: r_*(e) = deck_sign[e] * deck_edge[e].
  std::vector<int> deck_edge;
  std::vector<int> deck_sign;

  bool connected() const { return status == CoverStatus::connected; }
  int genus() const { return cover.genus(); }
  /// 2 - 2 g~ - 2 (2 - 2 g) + #branch points; zero for a connected cover.
  int riemann_hurwitz_defect() const;
};

DoubleCoverSurface build_double_cover(const FlatSurface& s);

/// 1-chain on the cover's edge classes with rational coefficients.
using Chain = linalg::RVec;

enum class Parity { even, odd };

struct HomologyBasis {
  std::vector<Chain> cycles;
  std::vector<Parity> parity;
  /// Intersection numbers of `cycles`, row i column j = cycles[i] . cycles[j].
  linalg::RMatrix intersection;
  /// True when cycles come in symplectic pairs (alpha_1, beta_1, alpha_2, ...).
  bool symplectic = false;

  std::size_t size() const { return cycles.size(); }
};

/// Exact rational homology machinery for one cover.  Holds a cohomology
/// basis of the barycentric subdivision so that intersection numbers of
/// arbitrary cellular cycles can be evaluated.
class CoverHomology {
 public:
  explicit CoverHomology(const DoubleCoverSurface& c);

  std::size_t num_edges() const { return boundary1_.cols(); }
  std::size_t rank() const { return basis_.size(); }

  /// A basis of H_1(cover; Q) as cellular cycles.
  const std::vector<Chain>& basis() const { return basis_; }

  bool is_cycle(const Chain& c) const;
  /// True when c is a boundary, i.e. zero in homology.
  bool is_boundary(const Chain& c) const;

  /// Coordinates of a cycle in basis().
  linalg::RVec coordinates(const Chain& c) const;
  linalg::Rational intersection(const Chain& a, const Chain& b) const;
  Chain deck(const Chain& c) const;

  /// Full basis split into even part then odd part.
  HomologyBasis eigen_split() const;

 private:
  linalg::RVec cocycle_values(const Chain& c) const;

  std::vector<int> deck_edge_;
  std::vector<int> deck_sign_;
  linalg::RMatrix boundary1_;   // vertices x edges
  linalg::RMatrix boundary2_;   // edges x faces
  std::vector<Chain> basis_;
  std::vector<linalg::RVec> cocycles_;   // on barycentric edges
  linalg::RMatrix pairing_inverse_;     // P^{-1}, P_ij = phi_i(basis_j)
  linalg::RMatrix dual_form_;           // kappa G^{-1}; a.b = phi(a)^T dual_form phi(b)
};

/// Symplectic basis (alpha_1, beta_1, ...) of the odd homology
/// H_1(cover)^-.  Throws DomainError for a disconnected cover unless
/// allow_orientable is set, and std::logic_error if the intersection form
/// on the odd part is degenerate.
HomologyBasis odd_symplectic_basis(const DoubleCoverSurface& c, bool allow_orientable = true);

struct Periods {
  std::vector<cplx> values;  // chi(cycles[k])
};

/// Integral of the lifted 1-form over a chain.  Throws DomainError for open chains.
cplx period(const DoubleCoverSurface& c, const Chain& chain);

Periods periods(const DoubleCoverSurface& c, const HomologyBasis& basis);

/// (i/4) sum_k (chi(a_k) conj chi(b_k) - chi(b_k) conj chi(a_k)).
/// Throws DomainError when the basis is not symplectic.
double ext_bilinear(const Periods& p, const HomologyBasis& basis);

/// Periods of a chain after applying a real-linear map to the surface:
/// chi'(c) = alpha chi(c) + beta conj(chi(c)).
Periods map_periods(const Periods& p, const RealLinearMap& m);

/// Cached cover, symplectic basis and periods for a fixed surface; the
/// combinatorics do not change under real-linear deformations, so
/// deformed periods are obtained from the base periods directly.
class PeriodEngine {
 public:
  explicit PeriodEngine(const FlatSurface& s);

  const DoubleCoverSurface& cover() const { return cover_; }
  const HomologyBasis& basis() const { return basis_; }
  const Periods& base_periods() const { return periods_; }
  double area() const { return cover_.base.area(); }

  double ext() const { return ext_bilinear(periods_, basis_); }

  /// Extremal length of the original vertical foliation at the point
  /// z -> z + lambda conj(z) of the Teichmüller disk.
  double teich_disk_ext(cplx lambda) const;

  /// Extremal length of the vertical foliation after the shear
  /// (x, y) -> (x, s x + t y).
  double shear_ext(double shear, double stretch) const;

 private:
  DoubleCoverSurface cover_;
  HomologyBasis basis_;
  Periods periods_;
};

std::string to_string(CoverStatus s);

}  // namespace teich::flat
