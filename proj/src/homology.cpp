#include "teich/homology.hpp"

#include <stdexcept>

namespace teich::flat {

using linalg::IncrementalBasis;
using linalg::Rational;
using linalg::RMatrix;
using linalg::RVec;

namespace {

// Sign convention of the cup-product duality, fixed so that on a flat torus
// the horizontal cycle meets the vertical one with intersection number +1.
constexpr int kDualitySign = -1;

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace

int DoubleCoverSurface::riemann_hurwitz_defect() const {
  const int chi_cover = 2 - 2 * cover.genus();
  const int chi_base = 2 - 2 * base.genus();
  return chi_cover - 2 * chi_base + static_cast<int>(branch_points.size());
}

std::string to_string(CoverStatus s) {
  return s == CoverStatus::connected ? "connected" : "orientable";
}

DoubleCoverSurface build_double_cover(const FlatSurface& s) {
  const auto& g = s.gluing();
  const int np = static_cast<int>(g.polygons.size());
  const int ne = static_cast<int>(g.pairings.size());

  GluingData cg;
  cg.polygons = g.polygons;
  for (const auto& poly : g.polygons) {
    auto neg = poly;
    for (auto& z : neg) z = -z;
    cg.polygons.push_back(std::move(neg));
  }
  cg.pairings.resize(2 * ne);
  for (int i = 0; i < ne; ++i) {
    const auto& pr = g.pairings[i];
    const int other = pr.flip ? np : 0;
    cg.pairings[i] = {pr.a, {pr.b.polygon + other, pr.b.edge}, false};
    cg.pairings[i + ne] = {{pr.a.polygon + np, pr.a.edge}, {(pr.b.polygon + np + other) % (2 * np), pr.b.edge},
                           false};
  }

  DoubleCoverSurface c{s, build(cg, /*allow_disconnected=*/true), CoverStatus::connected, {}, {}, {}};
  c.status = c.cover.components() == 1 ? CoverStatus::connected : CoverStatus::orientable;
  for (std::size_t k = 0; k < s.cone_points().size(); ++k)
    if (s.cone_points()[k].multiple % 2 == 1) c.branch_points.push_back(static_cast<int>(k));

  c.deck_edge.resize(2 * ne);
  c.deck_sign.resize(2 * ne);
  for (int e = 0; e < 2 * ne; ++e) {
    const auto& side = cg.pairings[e].a;
    const int rp = (side.polygon + np) % (2 * np);
    c.deck_edge[e] = c.cover.edge_class(rp, side.edge);
    c.deck_sign[e] = c.cover.edge_sign(rp, side.edge);
  }
  return c;
}

CoverHomology::CoverHomology(const DoubleCoverSurface& c)
    : deck_edge_(c.deck_edge), deck_sign_(c.deck_sign) {
  const FlatSurface& m = c.cover;
  const std::size_t nv = m.num_vertices(), ne = m.num_edges(), nf = m.num_faces();
  const auto& polys = m.gluing().polygons;

  boundary1_ = RMatrix(nv, ne);
  for (std::size_t e = 0; e < ne; ++e) {
    boundary1_(m.edge_end(e), e) += 1;
    boundary1_(m.edge_start(e), e) -= 1;
  }
  boundary2_ = RMatrix(ne, nf);
  for (std::size_t p = 0; p < nf; ++p)
    for (std::size_t k = 0; k < polys[p].size(); ++k)
      boundary2_(m.edge_class(p, k), p) += m.edge_sign(p, k);

  // H_1 = Z_1 / B_1, basis chosen greedily from the kernel of d1.
  IncrementalBasis span(ne);
  for (std::size_t p = 0; p < nf; ++p) span.add(boundary2_.column(p));
  for (auto& z : linalg::nullspace(boundary1_))
    if (span.add(z)) basis_.push_back(std::move(z));

  // Barycentric subdivision, a Delta-complex with vertices ordered
  // corner < edge midpoint < face center.
  //   half-edges      [start(e), m_e] -> 2e,  [end(e), m_e] -> 2e+1
  //   corner spokes   [v_{p,k}, c_p]  -> 2 ne + offset_p + k
  //   edge spokes     [m_{p,k}, c_p]  -> 2 ne + S + offset_p + k
  std::vector<std::size_t> offset(nf + 1, 0);
  for (std::size_t p = 0; p < nf; ++p) offset[p + 1] = offset[p] + polys[p].size();
  const std::size_t S = offset[nf];
  const std::size_t nbe = 2 * ne + 2 * S;
  const std::size_t nbv = nv + ne + nf;
  auto corner_spoke = [&](std::size_t p, std::size_t k) { return 2 * ne + offset[p] + k % polys[p].size(); };
  auto edge_spoke = [&](std::size_t p, std::size_t k) { return 2 * ne + S + offset[p] + k; };

  struct Triangle {
    std::size_t e01, e12, e02;
    int orientation;
  };
  std::vector<Triangle> tris;
  tris.reserve(2 * S);
  for (std::size_t p = 0; p < nf; ++p)
    for (std::size_t k = 0; k < polys[p].size(); ++k) {
      const std::size_t e = m.edge_class(p, k);
      const bool a_side = m.edge_sign(p, k) > 0;
      const std::size_t first_half = a_side ? 2 * e : 2 * e + 1;
      const std::size_t second_half = a_side ? 2 * e + 1 : 2 * e;
      tris.push_back({first_half, edge_spoke(p, k), corner_spoke(p, k), +1});
      tris.push_back({second_half, edge_spoke(p, k), corner_spoke(p, k + 1), -1});
    }

  RMatrix delta1(tris.size(), nbe);
  for (std::size_t t = 0; t < tris.size(); ++t) {
    delta1(t, tris[t].e12) += 1;
    delta1(t, tris[t].e02) -= 1;
    delta1(t, tris[t].e01) += 1;
  }
  // coboundaries of vertex indicator functions
  auto mid = [&](std::size_t e) { return nv + e; };
  auto center = [&](std::size_t p) { return nv + ne + p; };
  RMatrix delta0(nbe, nbv);
  auto set_edge = [&](std::size_t be, std::size_t from, std::size_t to) {
    delta0(be, to) += 1;
    delta0(be, from) -= 1;
  };
  for (std::size_t e = 0; e < ne; ++e) {
    set_edge(2 * e, m.edge_start(e), mid(e));
    set_edge(2 * e + 1, m.edge_end(e), mid(e));
  }
  for (std::size_t p = 0; p < nf; ++p)
    for (std::size_t k = 0; k < polys[p].size(); ++k) {
      set_edge(corner_spoke(p, k), m.vertex_orbit(p, k), center(p));
      set_edge(edge_spoke(p, k), mid(m.edge_class(p, k)), center(p));
    }

  IncrementalBasis coboundaries(nbe);
  for (std::size_t v = 0; v < nbv; ++v) coboundaries.add(delta0.column(v));
  for (auto& z : linalg::nullspace(delta1))
    if (coboundaries.add(z)) cocycles_.push_back(std::move(z));
  if (cocycles_.size() != basis_.size())
    throw std::logic_error("homology and cohomology ranks disagree");

  const std::size_t r = basis_.size();
  RMatrix pairing(r, r), cup(r, r);
  for (std::size_t j = 0; j < r; ++j) {
    const RVec vals = cocycle_values(basis_[j]);
    for (std::size_t i = 0; i < r; ++i) pairing(i, j) = vals[i];
  }
  for (const auto& t : tris)
    for (std::size_t i = 0; i < r; ++i) {
      const Rational& a = cocycles_[i][t.e01];
      if (a == 0) continue;
      for (std::size_t j = 0; j < r; ++j) {
        const Rational& b = cocycles_[j][t.e12];
        if (b != 0) cup(i, j) += t.orientation * a * b;
      }
    }
  pairing_inverse_ = linalg::inverse(pairing);
  dual_form_ = linalg::inverse(cup);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) dual_form_(i, j) *= kDualitySign;
}

RVec CoverHomology::cocycle_values(const Chain& c) const {
  if (c.size() != num_edges()) throw std::invalid_argument("chain length mismatch");
  RVec out(cocycles_.size());
  for (std::size_t e = 0; e < c.size(); ++e) {
    if (c[e] == 0) continue;
    for (std::size_t i = 0; i < cocycles_.size(); ++i) {
      const Rational v = cocycles_[i][2 * e] - cocycles_[i][2 * e + 1];
      if (v != 0) out[i] += c[e] * v;
    }
  }
  return out;
}

bool CoverHomology::is_cycle(const Chain& c) const {
  return linalg::is_zero(boundary1_ * c);
}

bool CoverHomology::is_boundary(const Chain& c) const {
  IncrementalBasis span(num_edges());
  for (std::size_t p = 0; p < boundary2_.cols(); ++p) span.add(boundary2_.column(p));
  return span.contains(c);
}

RVec CoverHomology::coordinates(const Chain& c) const {
  if (!is_cycle(c)) throw DomainError("chain is not closed");
  return pairing_inverse_ * cocycle_values(c);
}

Rational CoverHomology::intersection(const Chain& a, const Chain& b) const {
  return linalg::dot(cocycle_values(a), dual_form_ * cocycle_values(b));
}

Chain CoverHomology::deck(const Chain& c) const {
  if (c.size() != num_edges()) throw std::invalid_argument("chain length mismatch");
  Chain out(c.size());
  for (std::size_t e = 0; e < c.size(); ++e)
    if (c[e] != 0) out[deck_edge_[e]] += deck_sign_[e] * c[e];
  return out;
}

namespace {

RMatrix intersection_matrix(const CoverHomology& h, const std::vector<Chain>& cycles) {
  RMatrix m(cycles.size(), cycles.size());
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      m(i, j) = h.intersection(cycles[i], cycles[j]);
      m(j, i) = -m(i, j);
    }
  return m;
}

Chain combine(const Chain& a, const Rational& s, const Chain& b) {
  Chain out = a;
  if (s == 0) return out;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (b[i] != 0) out[i] += s * b[i];
  return out;
}

}  // namespace

HomologyBasis CoverHomology::eigen_split() const {
  HomologyBasis out;
  IncrementalBasis seen(rank());
  for (int pass = 0; pass < 2; ++pass) {
    const Rational s = pass == 0 ? Rational(1) : Rational(-1);
    for (const auto& h : basis_) {
      Chain v = combine(h, s, deck(h));
      for (auto& x : v) x /= 2;
      if (linalg::is_zero(v) || !seen.add(coordinates(v))) continue;
      out.cycles.push_back(std::move(v));
      out.parity.push_back(pass == 0 ? Parity::even : Parity::odd);
    }
  }
  out.intersection = intersection_matrix(*this, out.cycles);
  return out;
}

HomologyBasis odd_symplectic_basis(const DoubleCoverSurface& c, bool allow_orientable) {
  if (!c.connected() && !allow_orientable)
    throw DomainError("double cover is disconnected (q is the square of an abelian differential)");
  const CoverHomology h(c);
  const HomologyBasis split = h.eigen_split();

  std::vector<Chain> remaining;
  for (std::size_t i = 0; i < split.size(); ++i)
    if (split.parity[i] == Parity::odd) remaining.push_back(split.cycles[i]);

  // Skew Gram-Schmidt with deterministic pivots: first remaining cycle,
  // partnered with the first later cycle it meets.
  HomologyBasis out;
  while (!remaining.empty()) {
    const Chain alpha = remaining.front();
    std::size_t partner = 0;
    Rational w = 0;
    for (std::size_t j = 1; j < remaining.size(); ++j) {
      w = h.intersection(alpha, remaining[j]);
      if (w != 0) {
        partner = j;
        break;
      }
    }
    if (partner == 0) throw std::logic_error("intersection form on odd homology is degenerate");
    Chain beta = remaining[partner];
    for (auto& x : beta) x /= w;

    std::vector<Chain> next;
    for (std::size_t j = 1; j < remaining.size(); ++j) {
      if (j == partner) continue;
      const Chain& v = remaining[j];
      const Rational vb = h.intersection(v, beta);
      const Rational va = h.intersection(v, alpha);
      next.push_back(combine(combine(v, -vb, alpha), va, beta));
    }
    out.cycles.push_back(alpha);
    out.cycles.push_back(std::move(beta));
    out.parity.push_back(Parity::odd);
    out.parity.push_back(Parity::odd);
    remaining = std::move(next);
  }
  out.intersection = intersection_matrix(h, out.cycles);
  out.symplectic = true;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) {
      Rational expected = 0;
      if (i % 2 == 0 && j == i + 1) expected = 1;
      if (i % 2 == 1 && j + 1 == i) expected = -1;
      if (out.intersection(i, j) != expected) out.symplectic = false;
    }
  if (!out.symplectic) throw std::logic_error("symplectic reduction failed");
  return out;
}

cplx period(const DoubleCoverSurface& c, const Chain& chain) {
  if (chain.size() != c.cover.num_edges()) throw DomainError("chain length mismatch");
  std::vector<Rational> boundary(c.cover.num_vertices());
  for (std::size_t e = 0; e < chain.size(); ++e) {
    boundary[c.cover.edge_end(e)] += chain[e];
    boundary[c.cover.edge_start(e)] -= chain[e];
  }
  for (const auto& b : boundary)
    if (b != 0) throw DomainError("period of an open chain");
  cplx sum = 0.0;
  for (std::size_t e = 0; e < chain.size(); ++e)
    if (chain[e] != 0) sum += to_double(chain[e]) * c.cover.edge_vector(e);
  return sum;
}

Periods periods(const DoubleCoverSurface& c, const HomologyBasis& basis) {
  Periods p;
  for (const auto& cyc : basis.cycles) p.values.push_back(period(c, cyc));
  return p;
}

double ext_bilinear(const Periods& p, const HomologyBasis& basis) {
  if (!basis.symplectic || basis.size() % 2 != 0) throw DomainError("basis is not symplectic");
  if (p.values.size() != basis.size()) throw DomainError("period count does not match basis");
  // (i/4)(A conj B - B conj A) = -(1/2) Im(A conj B)
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < p.values.size(); k += 2)
    sum += -0.5 * std::imag(p.values[k] * std::conj(p.values[k + 1]));
  return sum;
}

Periods map_periods(const Periods& p, const RealLinearMap& m) {
  Periods out;
  out.values.reserve(p.values.size());
  for (const auto& z : p.values) out.values.push_back(m(z));
  return out;
}

PeriodEngine::PeriodEngine(const FlatSurface& s)
    : cover_(build_double_cover(s)),
      basis_(odd_symplectic_basis(cover_)),
      periods_(periods(cover_, basis_)) {}

double PeriodEngine::teich_disk_ext(cplx lambda) const {
  const cplx c = teich_disk_rescaling(lambda);
  Periods p = map_periods(periods_, teich_disk_map(lambda));
  for (auto& z : p.values) z *= c;
  return ext_bilinear(p, basis_);
}

double PeriodEngine::shear_ext(double shear, double stretch) const {
  return ext_bilinear(map_periods(periods_, vertical_shear_map(shear, stretch)), basis_);
}

}  // namespace teich::flat
