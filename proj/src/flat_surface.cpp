#include "teich/flat_surface.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace teich::flat {

namespace {

constexpr double kPi = std::numbers::pi;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double signed_area(const std::vector<cplx>& poly) {
  double s = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) s += cross(poly[k], poly[(k + 1) % poly.size()]);
  return 0.5 * s;
}

bool segments_touch(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double eps = kGluingTolerance;
  auto orient = [](cplx a, cplx b, cplx c) { return cross(b - a, c - a); };
  auto on_segment = [&](cplx a, cplx b, cplx c) {
    return std::abs(orient(a, b, c)) <= eps * std::abs(b - a) &&
           std::min(a.real(), b.real()) - eps <= c.real() && c.real() <= std::max(a.real(), b.real()) + eps &&
           std::min(a.imag(), b.imag()) - eps <= c.imag() && c.imag() <= std::max(a.imag(), b.imag()) + eps;
  };
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  return on_segment(q1, q2, p1) || on_segment(q1, q2, p2) || on_segment(p1, p2, q1) ||
         on_segment(p1, p2, q2);
}

void check_polygon(const std::vector<cplx>& poly, std::size_t index) {
  const std::string where = "polygon " + std::to_string(index);
  const std::size_t n = poly.size();
  if (n < 3) throw GluingError(where + ": needs at least 3 vertices");
  for (const auto& z : poly)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw GluingError(where + ": non-finite vertex");
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(poly[(k + 1) % n] - poly[k]) <= kGluingTolerance)
      throw GluingError(where + ": repeated vertex " + std::to_string(k));
  if (signed_area(poly) <= 0.0) throw GluingError(where + ": vertices must be counter-clockwise");
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a0 = poly[i], a1 = poly[(i + 1) % n];
    // consecutive edges may only meet at their shared vertex
    const cplx b1 = poly[(i + 2) % n];
    if (std::abs(cross(a1 - a0, b1 - a1)) <= kGluingTolerance * std::abs(a1 - a0) &&
        std::real((a1 - a0) * std::conj(b1 - a1)) < 0.0)
      throw GluingError(where + " is not simple: edge " + std::to_string(i) + " doubles back");
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_touch(a0, a1, poly[j], poly[(j + 1) % n]))
        throw GluingError(where + " is not simple: edges " + std::to_string(i) + " and " +
                          std::to_string(j) + " intersect");
    }
  }
}

// Interior angle at vertex k of a counter-clockwise polygon, in (0, 2 pi).
double interior_angle(const std::vector<cplx>& poly, std::size_t k) {
  const std::size_t n = poly.size();
  const cplx out = poly[(k + 1) % n] - poly[k];
  const cplx back = poly[(k + n - 1) % n] - poly[k];
  double a = std::arg(back / out);
  if (a <= 0.0) a += 2.0 * kPi;
  return a;
}

std::string describe(const Pairing& p, std::size_t index) {
  std::ostringstream s;
  s << "pairing " << index << " (polygon " << p.a.polygon << " edge " << p.a.edge << " <-> polygon "
    << p.b.polygon << " edge " << p.b.edge << (p.flip ? ", flip" : "") << ")";
  return s.str();
}

}  // namespace

GluingData gluing_from_json(const nlohmann::json& j) {
  GluingData g;
  try {
    for (const auto& poly : j.at("polygons")) {
      std::vector<cplx> verts;
      for (const auto& v : poly) {
        if (!v.is_array() || v.size() != 2) throw GluingError("vertex must be a [re, im] pair");
        verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
      }
      g.polygons.push_back(std::move(verts));
    }
    for (const auto& pj : j.at("pairings")) {
      Pairing p;
      const auto& a = pj.at("a");
      const auto& b = pj.at("b");
      if (a.size() != 2 || b.size() != 2) throw GluingError("pairing sides must be [polygon, edge]");
      p.a = {a.at(0).get<int>(), a.at(1).get<int>()};
      p.b = {b.at(0).get<int>(), b.at(1).get<int>()};
      p.flip = pj.at("flip").get<bool>();
      g.pairings.push_back(p);
    }
  } catch (const nlohmann::json::exception& e) {
    throw GluingError(std::string("malformed gluing data: ") + e.what());
  }
  return g;
}

nlohmann::json gluing_to_json(const GluingData& g) {
  nlohmann::json j;
  j["polygons"] = nlohmann::json::array();
  for (const auto& poly : g.polygons) {
    nlohmann::json pj = nlohmann::json::array();
    for (const auto& z : poly) pj.push_back({z.real(), z.imag()});
    j["polygons"].push_back(pj);
  }
  j["pairings"] = nlohmann::json::array();
  for (const auto& p : g.pairings)
    j["pairings"].push_back(
        {{"a", {p.a.polygon, p.a.edge}}, {"b", {p.b.polygon, p.b.edge}}, {"flip", p.flip}});
  return j;
}

GluingData load_gluing(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GluingError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw GluingError(path.string() + ": invalid JSON: " + e.what());
  }
  return gluing_from_json(j);
}

int FlatSurface::punctures() const {
  int n = 0;
  for (const auto& c : cones_) n += c.multiple == 1;
  return n;
}

cplx FlatSurface::edge_vector(std::size_t e) const {
  const auto& side = gluing_.pairings.at(e).a;
  const auto& poly = gluing_.polygons[side.polygon];
  return poly[(side.edge + 1) % poly.size()] - poly[side.edge];
}

int FlatSurface::edge_start(std::size_t e) const {
  const auto& side = gluing_.pairings.at(e).a;
  return corner_orbit_[side.polygon][side.edge];
}

int FlatSurface::edge_end(std::size_t e) const {
  const auto& side = gluing_.pairings.at(e).a;
  const auto n = gluing_.polygons[side.polygon].size();
  return corner_orbit_[side.polygon][(side.edge + 1) % n];
}

bool FlatSurface::has_flips() const {
  for (const auto& p : gluing_.pairings)
    if (p.flip) return true;
  return false;
}

double FlatSurface::gauss_bonnet_defect() const {
  double curvature = 0.0;
  for (const auto& c : cones_) curvature += 2.0 * kPi - c.angle;
  return curvature - 2.0 * kPi * euler_;
}

FlatSurface build(const GluingData& g, bool allow_disconnected) {
  if (g.polygons.empty()) throw GluingError("no polygons");
  for (std::size_t p = 0; p < g.polygons.size(); ++p) check_polygon(g.polygons[p], p);

  FlatSurface s;
  s.gluing_ = g;
  const auto np = g.polygons.size();
  s.edge_class_.resize(np);
  s.edge_sign_.resize(np);
  s.corner_orbit_.resize(np);
  std::vector<std::size_t> offset(np + 1, 0);
  for (std::size_t p = 0; p < np; ++p) {
    const auto n = g.polygons[p].size();
    s.edge_class_[p].assign(n, -1);
    s.edge_sign_[p].assign(n, 0);
    offset[p + 1] = offset[p] + n;
  }

  auto valid_ref = [&](const EdgeRef& r) {
    return r.polygon >= 0 && static_cast<std::size_t>(r.polygon) < np && r.edge >= 0 &&
           static_cast<std::size_t>(r.edge) < g.polygons[r.polygon].size();
  };
  auto edge_vec = [&](const EdgeRef& r) {
    const auto& poly = g.polygons[r.polygon];
    return poly[(r.edge + 1) % poly.size()] - poly[r.edge];
  };

  for (std::size_t i = 0; i < g.pairings.size(); ++i) {
    const auto& pr = g.pairings[i];
    if (!valid_ref(pr.a) || !valid_ref(pr.b)) throw GluingError(describe(pr, i) + ": edge index out of range");
    if (pr.a == pr.b) throw GluingError(describe(pr, i) + ": an edge cannot be glued to itself");
    for (const auto& [side, sign] : {std::pair{pr.a, 1}, std::pair{pr.b, -1}}) {
      int& slot = s.edge_class_[side.polygon][side.edge];
      if (slot != -1)
        throw GluingError(describe(pr, i) + ": polygon " + std::to_string(side.polygon) + " edge " +
                          std::to_string(side.edge) + " is already glued");
      slot = static_cast<int>(i);
      s.edge_sign_[side.polygon][side.edge] = sign;
    }
    const cplx da = edge_vec(pr.a), db = edge_vec(pr.b);
    if (std::abs(std::abs(da) - std::abs(db)) > kGluingTolerance) {
      std::ostringstream m;
      m.precision(17);
      m << describe(pr, i) << ": edge lengths differ (" << std::abs(da) << " vs " << std::abs(db) << ")";
      throw GluingError(m.str());
    }
    const cplx expected = pr.flip ? da : -da;
    if (std::abs(db - expected) > kGluingTolerance)
      throw GluingError(describe(pr, i) + (pr.flip ? ": flip gluing needs equal edge vectors"
                                                    : ": translation gluing needs opposite edge vectors"));
  }
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t k = 0; k < g.polygons[p].size(); ++k)
      if (s.edge_class_[p][k] == -1)
        throw GluingError("polygon " + std::to_string(p) + " edge " + std::to_string(k) + " is not glued");

  // connectivity of polygons across pairings
  UnionFind faces(np);
  for (const auto& pr : g.pairings) faces.unite(pr.a.polygon, pr.b.polygon);
  s.components_ = 0;
  for (std::size_t p = 0; p < np; ++p)
    if (faces.find(p) == p) ++s.components_;
  if (s.components_ > 1 && !allow_disconnected) throw GluingError("glued complex is disconnected");

  // vertex orbits: start(a) ~ end(b), end(a) ~ start(b)
  UnionFind corners(offset[np]);
  auto corner = [&](int p, std::size_t k) { return offset[p] + k % g.polygons[p].size(); };
  for (const auto& pr : g.pairings) {
    corners.unite(corner(pr.a.polygon, pr.a.edge), corner(pr.b.polygon, pr.b.edge + 1));
    corners.unite(corner(pr.a.polygon, pr.a.edge + 1), corner(pr.b.polygon, pr.b.edge));
  }
  std::vector<int> root_to_orbit(offset[np], -1);
  for (std::size_t p = 0; p < np; ++p) {
    s.corner_orbit_[p].resize(g.polygons[p].size());
    for (std::size_t k = 0; k < g.polygons[p].size(); ++k) {
      const auto root = corners.find(corner(static_cast<int>(p), k));
      if (root_to_orbit[root] == -1) {
        root_to_orbit[root] = static_cast<int>(s.cones_.size());
        s.cones_.emplace_back();
      }
      const int orbit = root_to_orbit[root];
      s.corner_orbit_[p][k] = orbit;
      auto& cone = s.cones_[orbit];
      cone.corners.push_back({static_cast<int>(p), static_cast<int>(k)});
      cone.angle += interior_angle(g.polygons[p], k);
    }
  }
  for (std::size_t c = 0; c < s.cones_.size(); ++c) {
    auto& cone = s.cones_[c];
    cone.multiple = static_cast<int>(std::lround(cone.angle / kPi));
    if (cone.multiple < 1 || std::abs(cone.angle - cone.multiple * kPi) > 1e-6)
      throw GluingError("cone point " + std::to_string(c) + " has angle " + std::to_string(cone.angle) +
                        ", not a positive multiple of pi");
  }

  s.euler_ = static_cast<int>(s.cones_.size()) - static_cast<int>(g.pairings.size()) + static_cast<int>(np);
  if (s.euler_ > 2 * s.components_ || s.euler_ % 2 != 0)
    throw GluingError("Euler characteristic " + std::to_string(s.euler_) + " is not that of a closed surface");
  s.genus_ = (2 * s.components_ - s.euler_) / 2;
  for (const auto& poly : g.polygons) s.area_ += signed_area(poly);
  return s;
}

GenericityResult check_generic(const FlatSurface& s) {
  GenericityResult r;
  const auto& cones = s.cone_points();
  for (std::size_t c = 0; c < cones.size(); ++c)
    if (cones[c].multiple > 3) r.witnesses.push_back(static_cast<int>(c));
  r.generic = r.witnesses.empty();
  return r;
}

FlatSurface transform(const FlatSurface& s, const RealLinearMap& m) {
  if (!(m.determinant() > 0.0)) throw DomainError("map must preserve orientation");
  GluingData g = s.gluing();
  for (auto& poly : g.polygons)
    for (auto& z : poly) z = m(z);
  return build(g);
}

RealLinearMap teich_disk_map(cplx lambda) {
  if (!(std::abs(lambda) < 1.0)) throw DomainError("Teichmüller disk parameter needs |lambda| < 1");
  return {cplx(1.0, 0.0), lambda};
}

RealLinearMap vertical_shear_map(double shear, double stretch) {
  if (!std::isfinite(shear) || !(stretch > 0.0)) throw DomainError("shear needs stretch t > 0");
  return {cplx((1.0 + stretch) / 2.0, shear / 2.0), cplx((1.0 - stretch) / 2.0, shear / 2.0)};
}

FlatSurface teich_disk_deform(const FlatSurface& s, cplx lambda) {
  return transform(s, teich_disk_map(lambda));
}

FlatSurface vertical_preserving_shear(const FlatSurface& s, double shear, double stretch) {
  return transform(s, vertical_shear_map(shear, stretch));
}

FlatSurface scale(const FlatSurface& s, double factor) {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  return transform(s, {cplx(factor, 0.0), cplx(0.0, 0.0)});
}

cplx teich_disk_rescaling(cplx lambda) {
  if (!(std::abs(lambda) < 1.0)) throw DomainError("Teichmüller disk parameter needs |lambda| < 1");
  return (1.0 - std::conj(lambda)) / (1.0 - std::norm(lambda));
}

double teich_disk_ext_formula(double area, cplx lambda) {
  if (!(std::abs(lambda) < 1.0)) throw DomainError("Teichmüller disk parameter needs |lambda| < 1");
  return area * std::norm(1.0 - lambda) / (1.0 - std::norm(lambda));
}

}  // namespace teich::flat
