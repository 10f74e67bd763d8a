#include "teich/psh_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

namespace teich::psh {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(cplx z) { return fmt(z.real()) + "," + fmt(z.imag()); }

// |1 - l|^2 / (1 - |l|^2) and its Wirtinger derivatives.
struct DiskProfile {
  double phi, phi_l_abs2, phi_llbar;
  cplx phi_l;
};

DiskProfile disk_profile(cplx l) {
  double u = std::norm(1.0 - l);
  double w = 1.0 - std::norm(l);
  cplx d = -(1.0 - std::conj(l)) * (1.0 - std::conj(l)) / (w * w);
  return {u / w, std::norm(d), 2.0 * u / (w * w * w), d};
}

// Ext, d Ext / dmu and d^2 Ext / dmu dmubar in closed form along the disk.
struct Jet {
  double e;
  cplx e_mu;
  double e_mumubar;
};

Jet closed_form_jet(const torus::Foliation& f, const HoloDisk& disk, cplx mu) {
  if (disk.is_torus()) {
    torus::Point x = disk.torus_point(mu);
    torus::Tangent t{x, disk.torus().V};
    return {torus::extremal_length(x, f), torus::gardiner_derivative(x, f, t), torus::levi_form(x, f, t)};
  }
  const FlatDisk& fd = disk.flat();
  cplx l = disk.flat_lambda(mu);
  double e = fd.engine->teich_disk_ext(l);
  DiskProfile p = disk_profile(l);
  double area = e / p.phi;
  return {e, area * p.phi_l * fd.direction, area * p.phi_llbar * std::norm(fd.direction)};
}

std::string point_witness(const HoloDisk& disk, cplx mu) {
  return disk.describe() + " mu=" + fmt(mu);
}

torus::Point random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-1.0, 1.0), im(0.5, 2.0);
  double x = re(rng);
  return torus::Point(x, im(rng));
}

torus::Foliation random_foliation(std::mt19937_64& rng, bool integer) {
  if (integer) {
    std::uniform_int_distribution<int> d(-10, 10);
    for (;;) {
      int a = d(rng), b = d(rng);
      if (a != 0 || b != 0) return torus::Foliation(a, b);
    }
  }
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (;;) {
    double a = d(rng), b = d(rng);
    if (std::hypot(a, b) > 1e-3) return torus::Foliation(a, b);
  }
}

cplx random_direction(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> m(lo, hi), th(0.0, 2.0 * kPi);
  double r = m(rng);
  return std::polar(r, th(rng));
}

}  // namespace

HoloDisk HoloDisk::torus_affine(torus::Point center, cplx V, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("disk radius must be positive and finite");
  if (!std::isfinite(V.real()) || !std::isfinite(V.imag())) throw DomainError("disk direction must be finite");
  if (center.im() - radius * std::abs(V) <= 0.0)
    throw DomainError("torus disk leaves the upper half-plane: Im tau0 - r|V| = " +
                      fmt(center.im() - radius * std::abs(V)));
  return HoloDisk(TorusDisk{center, V}, radius);
}

HoloDisk HoloDisk::flat_disk(std::shared_ptr<const flat::PeriodEngine> engine, cplx center, cplx direction,
                             double radius) {
  if (!engine) throw DomainError("flat disk needs a period engine");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("disk radius must be positive and finite");
  if (!(radius < 1.0)) throw DomainError("flat disk radius must be < 1");
  if (std::abs(center) + radius * std::abs(direction) >= 1.0)
    throw DomainError("flat disk leaves the Teichmüller disk");
  return HoloDisk(FlatDisk{std::move(engine), center, direction}, radius);
}

namespace {
void check_inside(const HoloDisk& d, cplx mu) {
  if (!(std::abs(mu) <= d.radius() * (1.0 + 1e-12)))
    throw DomainError("evaluation outside disk: |mu| = " + fmt(std::abs(mu)) + " > r = " + fmt(d.radius()));
}
}  // namespace

torus::Point HoloDisk::torus_point(cplx mu) const {
  check_inside(*this, mu);
  const TorusDisk& t = torus();
  return torus::Point(t.center.tau() + mu * t.V);
}

cplx HoloDisk::flat_lambda(cplx mu) const {
  check_inside(*this, mu);
  const FlatDisk& f = flat();
  return f.center + mu * f.direction;
}

std::string HoloDisk::describe() const {
  if (is_torus()) return "torus(tau0=" + fmt(torus().center.tau()) + " V=" + fmt(torus().V) + " r=" + fmt(radius_) + ")";
  return "flat(center=" + fmt(flat().center) + " dir=" + fmt(flat().direction) + " r=" + fmt(radius_) + ")";
}

ScalarField ScalarField::ext(const torus::Foliation& f) {
  ScalarField s;
  s.kind = FieldKind::ext;
  s.foliations = {f};
  s.weights = {1.0};
  return s;
}

ScalarField ScalarField::log_ext(const torus::Foliation& f) {
  ScalarField s = ext(f);
  s.kind = FieldKind::log_ext;
  return s;
}

ScalarField ScalarField::reciprocal(std::vector<torus::Foliation> fs, std::vector<double> weights, double c) {
  if (fs.empty() || fs.size() != weights.size()) throw DomainError("reciprocal field needs one weight per foliation");
  double sum = 0.0;
  for (double a : weights) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("reciprocal weights must be finite and >= 0");
    sum += a;
  }
  if (!(sum > 0.0)) throw DomainError("reciprocal field: all weights are zero");
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("reciprocal constant must be finite and >= 0");
  ScalarField s;
  s.kind = FieldKind::reciprocal;
  s.foliations = std::move(fs);
  s.weights = std::move(weights);
  s.constant = c;
  return s;
}

ScalarField ScalarField::distance(const torus::Point& x0) {
  ScalarField s;
  s.kind = FieldKind::distance;
  s.reference = x0;
  return s;
}

std::string ScalarField::name() const {
  switch (kind) {
    case FieldKind::ext: return "Ext" + torus::to_string(foliations[0]);
    case FieldKind::log_ext: return "logExt" + torus::to_string(foliations[0]);
    case FieldKind::reciprocal: return "rho(n=" + std::to_string(foliations.size()) + ",c=" + fmt(constant) + ")";
    case FieldKind::distance: return "dT(" + torus::to_string(reference) + ")";
  }
  return "?";
}

double evaluate(const ScalarField& field, const HoloDisk& disk, cplx mu) {
  if (disk.is_torus()) {
    torus::Point x = disk.torus_point(mu);
    switch (field.kind) {
      case FieldKind::ext: return torus::extremal_length(x, field.foliations[0]);
      case FieldKind::log_ext: return std::log(torus::extremal_length(x, field.foliations[0]));
      case FieldKind::reciprocal: {
        double u = field.constant;
        for (std::size_t k = 0; k < field.foliations.size(); ++k)
          u += field.weights[k] * torus::extremal_length(x, field.foliations[k]);
        return -1.0 / u;
      }
      case FieldKind::distance: return torus::teich_distance(field.reference, x);
    }
  }
  cplx l = disk.flat_lambda(mu);
  double e = disk.flat().engine->teich_disk_ext(l);
  switch (field.kind) {
    case FieldKind::ext: return e;
    case FieldKind::log_ext: return std::log(e);
    case FieldKind::reciprocal: return -1.0 / (field.constant + field.weights[0] * e);
    case FieldKind::distance: throw DomainError("distance field is only available on torus disks");
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {
void check_stencil(const HoloDisk& disk, cplx mu0, double h) {
  if (!(h > 0.0)) throw DomainError("step must be positive");
  if (!(h < disk.radius() / 10.0)) throw DomainError("step " + fmt(h) + " must be < r/10 = " + fmt(disk.radius() / 10.0));
  if (std::abs(mu0) + h > disk.radius() * (1.0 + 1e-12))
    throw DomainError("stencil at mu0 = " + fmt(mu0) + " leaves the disk");
}

double stencil(const ScalarField& f, const HoloDisk& d, cplx m, double h, double center) {
  const cplx ih(0.0, h);
  return (evaluate(f, d, m + h) + evaluate(f, d, m - h) + evaluate(f, d, m + ih) + evaluate(f, d, m - ih) -
          4.0 * center) /
         (4.0 * h * h);
}
}  // namespace

double fd_dbar_d_raw(const ScalarField& field, const HoloDisk& disk, cplx mu0, double h) {
  check_stencil(disk, mu0, h);
  return stencil(field, disk, mu0, h, evaluate(field, disk, mu0));
}

double fd_dbar_d(const ScalarField& field, const HoloDisk& disk, cplx mu0, double h) {
  check_stencil(disk, mu0, h);
  double c = evaluate(field, disk, mu0);
  double coarse = stencil(field, disk, mu0, h, c);
  double fine = stencil(field, disk, mu0, h / 2.0, c);
  return (4.0 * fine - coarse) / 3.0;
}

cplx fd_d(const ScalarField& field, const HoloDisk& disk, cplx mu0, double h) {
  check_stencil(disk, mu0, h);
  auto central = [&](double s) {
    const cplx is(0.0, s);
    double fx = (evaluate(field, disk, mu0 + s) - evaluate(field, disk, mu0 - s)) / (2.0 * s);
    double fy = (evaluate(field, disk, mu0 + is) - evaluate(field, disk, mu0 - is)) / (2.0 * s);
    return cplx(fx, -fy) / 2.0;
  };
  return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

double default_step(const HoloDisk& disk) {
  double h = 1e-4;
  if (disk.is_torus()) {
    double v = std::abs(disk.torus().V);
    h = v > 0.0 ? 1e-3 * disk.torus().center.im() / v : 1e-3;
  } else {
    h = 1e-3 / std::max(std::abs(disk.flat().direction), 1e-300);
  }
  return std::min(h, disk.radius() / 20.0);
}

std::vector<cplx> default_grid() {
  std::vector<cplx> g{cplx(0.0, 0.0)};
  for (double r : {1.0 / 6.0, 1.0 / 3.0, 0.5})
    for (int k = 0; k < 8; ++k) g.push_back(std::polar(r, kPi * k / 4.0 + r));
  return g;
}

std::vector<HoloDisk> random_torus_disks(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<HoloDisk> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    torus::Point x = random_point(rng);
    cplx V = random_direction(rng, 0.1, 1.5);
    double r = std::min(1.0, 0.9 * (x.im() - kTorusFloor) / std::abs(V));
    out.push_back(HoloDisk::torus_affine(x, V, r));
  }
  return out;
}

std::vector<HoloDisk> random_flat_disks(std::shared_ptr<const flat::PeriodEngine> engine, std::size_t n,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.0, 1.0), th(0.0, 2.0 * kPi);
  std::vector<HoloDisk> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx c = std::polar(0.6 * std::sqrt(rad(rng)), th(rng));
    cplx dir = std::polar(1.0, th(rng));
    double r = std::min(0.3, kFlatCeiling - std::abs(c));
    out.push_back(HoloDisk::flat_disk(engine, c, dir, r));
  }
  return out;
}

VerificationReport verify_log_psh(const torus::Foliation& f, const std::vector<HoloDisk>& disks,
                                  const std::vector<cplx>& grid, double tol) {
  ScalarField field = ScalarField::log_ext(f);
  SlackTracker tr;
  std::size_t idx = 0;
  double max_err = 0.0;
  for (const HoloDisk& d : disks) {
    double h = default_step(d);
    for (cplx g : grid) {
      cplx mu = g * d.radius();
      double v = fd_dbar_d(field, d, mu, h);
      Jet j = closed_form_jet(f, d, mu);
      double exact = j.e_mumubar / j.e - std::norm(j.e_mu) / (j.e * j.e);
      max_err = std::max(max_err, std::abs(v - exact));
      tr.observe_lazy(v, idx++, [&] { return point_witness(d, mu); });
    }
  }
  VerificationReport r = tr.report("log-psh", tol);
  r.metrics["max_abs_error_vs_closed_form"] = max_err;
  r.metrics["disks"] = static_cast<double>(disks.size());
  return r;
}

VerificationReport verify_reciprocal_psh(const std::vector<torus::Foliation>& fs, const std::vector<double>& weights,
                                         double c, const std::vector<HoloDisk>& disks, const ReciprocalOptions& opts) {
  ScalarField field = ScalarField::reciprocal(fs, weights, c);
  SlackTracker psh, bounds;
  std::size_t idx = 0;
  for (const HoloDisk& d : disks) {
    double h = default_step(d);
    for (cplx g : opts.grid) {
      cplx mu = g * d.radius();
      double rho = evaluate(field, d, mu);
      double lower = c > 0.0 ? rho + 1.0 / c : std::numeric_limits<double>::infinity();
      double b = std::min(-rho, lower);
      bounds.observe_lazy(b, idx, [&] { return point_witness(d, mu) + " rho=" + fmt(rho); });
      psh.observe_lazy(fd_dbar_d(field, d, mu, h), idx, [&] { return point_witness(d, mu); });
      ++idx;
    }
  }
  VerificationReport r = psh.report("reciprocal", opts.tol);
  r.metrics["bounds_min_slack"] = bounds.min();
  r.metrics["psh_min_slack"] = psh.min();
  if (bounds.min() <= 0.0 && idx > 0) {
    r.min_slack = std::min(r.min_slack, bounds.min());
    r.witness = bounds.witness();
    r.pass = false;
  }
  return r;
}

VerificationReport reciprocal_grid_bounds(const std::vector<torus::Foliation>& fs, const std::vector<double>& weights,
                                          double c, double x0, double x1, double y0, double y1, std::size_t nx,
                                          std::size_t ny) {
  if (nx == 0 || ny == 0) throw DomainError("grid needs at least one point per axis");
  ScalarField field = ScalarField::reciprocal(fs, weights, c);
  SlackTracker tr;
  std::size_t idx = 0;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      double x = nx == 1 ? x0 : x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(nx - 1);
      double y = ny == 1 ? y0 : y0 + (y1 - y0) * static_cast<double>(j) / static_cast<double>(ny - 1);
      HoloDisk d = HoloDisk::torus_affine(torus::Point(x, y), 0.0, 1.0);
      double rho = evaluate(field, d, 0.0);
      double lower = c > 0.0 ? rho + 1.0 / c : std::numeric_limits<double>::infinity();
      tr.observe_lazy(std::min(-rho, lower), idx++, [&] { return fmt(cplx(x, y)) + " rho=" + fmt(rho); });
    }
  VerificationReport r = tr.report("reciprocal-bounds", 0.0);
  r.pass = tr.min() > 0.0;
  return r;
}

VerificationReport properness_proxy(const torus::Point& x0, const torus::Foliation& f, const torus::Foliation& g,
                                    std::size_t rays, double tol) {
  if (rays == 0) throw DomainError("properness proxy needs at least one ray");
  double m0 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rays; ++k) {
    double th = kPi * static_cast<double>(k) / static_cast<double>(rays);
    torus::Foliation h(std::cos(th), std::sin(th));
    double s = torus::extremal_length(x0, h);
    double v = (std::pow(torus::intersection(f, h), 2) + std::pow(torus::intersection(g, h), 2)) / s;
    m0 = std::min(m0, v);
  }
  SlackTracker tr;
  std::size_t idx = 0;
  const double a = x0.tau().real(), b = x0.im();
  for (std::size_t k = 0; k < rays; ++k) {
    double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(rays);
    for (double dist : {0.25, 0.5, 1.0, 2.0, 3.0}) {
      cplx w = std::polar(std::tanh(dist), th);  // Poincaré distance 2 dist from 0
      cplx z = cplx(0, 1) * (1.0 + w) / (1.0 - w);
      torus::Point x(a + b * z.real(), b * z.imag());
      double d = torus::teich_distance(x0, x);
      double lhs = torus::extremal_length(x, f) + torus::extremal_length(x, g);
      double rhs = std::exp(2.0 * d) * m0;
      tr.observe_lazy((lhs - rhs) / rhs, idx++, [&] { return torus::to_string(x); });
    }
  }
  VerificationReport r = tr.report("properness", tol);
  r.metrics["m0"] = m0;
  r.metrics["rays"] = static_cast<double>(rays);
  if (!(m0 > 0.0)) {
    r.pass = false;
    r.min_slack = std::min(r.min_slack, m0);
  }
  return r;
}

double mean_value_slack(const ScalarField& field, const HoloDisk& disk, double radius, std::size_t nodes) {
  if (nodes < 3) throw DomainError("circle quadrature needs at least 3 nodes");
  if (!(radius > 0.0) || radius > disk.radius() * (1.0 + 1e-12)) throw DomainError("circle leaves the disk");
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes; ++k)
    sum += evaluate(field, disk, std::polar(radius, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(nodes)));
  return sum / static_cast<double>(nodes) - evaluate(field, disk, 0.0);
}

VerificationReport verify_distance_psh(const torus::Point& x0, const std::vector<HoloDisk>& disks,
                                       const MeanValueOptions& opts) {
  if (opts.nodes < 64) throw DomainError("distance sub-mean-value test needs >= 64 nodes");
  ScalarField field = ScalarField::distance(x0);
  SlackTracker tr;
  std::size_t idx = 0;
  for (const HoloDisk& d : disks) {
    if (!d.is_torus()) throw DomainError("distance test runs on torus disks only");
    for (double frac : opts.radii) {
      double r = frac * d.radius();
      tr.observe_lazy(mean_value_slack(field, d, r, opts.nodes), idx++,
                      [&] { return d.describe() + " r'=" + fmt(r); });
    }
  }
  VerificationReport rep = tr.report("distance", opts.tol);
  rep.metrics["nodes"] = static_cast<double>(opts.nodes);
  return rep;
}

VerificationReport verify_horoball_diskconvex(const torus::Foliation& f, double epsilon,
                                              const std::vector<HoloDisk>& disks, const std::vector<cplx>& grid,
                                              const MaxPrincipleOptions& opts) {
  if (opts.boundary_nodes < 4) throw DomainError("boundary grid needs at least 4 nodes");
  ScalarField field = ScalarField::ext(f);
  SlackTracker tr;
  std::size_t idx = 0, inside = 0, followed = 0;
  for (const HoloDisk& d : disks) {
    double bmax = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < opts.boundary_nodes; ++k)
      bmax = std::max(bmax, evaluate(field, d, std::polar(d.radius(), 2.0 * kPi * static_cast<double>(k) /
                                                                          static_cast<double>(opts.boundary_nodes))));
    double imax = -std::numeric_limits<double>::infinity();
    cplx arg = 0.0;
    for (cplx g : grid) {
      double v = evaluate(field, d, g * d.radius());
      if (v > imax) {
        imax = v;
        arg = g * d.radius();
      }
    }
    if (bmax < epsilon) {
      ++inside;
      if (imax < epsilon) ++followed;
    }
    tr.observe_lazy(bmax - imax, idx++, [&] { return point_witness(d, arg); });
  }
  VerificationReport r = tr.report("horoball", opts.tol);
  r.metrics["epsilon"] = epsilon;
  r.metrics["boundary_in_horoball"] = static_cast<double>(inside);
  r.metrics["interior_in_horoball"] = static_cast<double>(followed);
  return r;
}

VerificationReport verify_currents_inequality(const torus::Foliation& f, const std::vector<HoloDisk>& disks,
                                              const std::vector<cplx>& grid, double tol) {
  ScalarField ext = ScalarField::ext(f), lg = ScalarField::log_ext(f);
  SlackTracker tr;
  std::size_t idx = 0;
  double max_gap = 0.0;
  for (const HoloDisk& d : disks) {
    double h = default_step(d);
    for (cplx g : grid) {
      cplx mu = g * d.radius();
      double e = evaluate(ext, d, mu);
      double left = std::norm(fd_d(lg, d, mu, h));
      double mid = fd_dbar_d(ext, d, mu, h) / (2.0 * e);
      double right = fd_dbar_d(lg, d, mu, h);
      tr.observe_lazy(std::min(mid - left, right - mid), idx++, [&] { return point_witness(d, mu); });
      if (d.is_torus()) {
        Jet j = closed_form_jet(f, d, mu);
        double l = std::norm(j.e_mu) / (j.e * j.e);
        double m = j.e_mumubar / (2.0 * j.e);
        double r = j.e_mumubar / j.e - l;
        double scale = std::max({1.0, l, m, r});
        max_gap = std::max({max_gap, std::abs(l - m) / scale, std::abs(m - r) / scale});
      }
    }
  }
  VerificationReport rep = tr.report("currents", tol);
  rep.metrics["torus_equality_max_gap"] = max_gap;
  if (max_gap > kClosedFormTol) {
    rep.pass = false;
    rep.min_slack = std::min(rep.min_slack, -max_gap);
  }
  return rep;
}

VerificationReport verify_strong_positivity_fd(const torus::Foliation& f, const std::vector<HoloDisk>& disks,
                                               const std::vector<cplx>& grid, double tol) {
  ScalarField ext = ScalarField::ext(f);
  SlackTracker tr;
  std::size_t idx = 0;
  for (const HoloDisk& d : disks) {
    double h = default_step(d);
    double dir = d.is_torus() ? std::abs(d.torus().V) : std::abs(d.flat().direction);
    for (cplx g : grid) {
      cplx mu = g * d.radius();
      double e = evaluate(ext, d, mu);
      double v = e * fd_dbar_d(ext, d, mu, h) - 2.0 * std::norm(fd_d(ext, d, mu, h));
      double scale = std::max(1.0, e * e * dir * dir);
      tr.observe_lazy(v / scale, idx++, [&] { return point_witness(d, mu); });
    }
  }
  return tr.report("strong-positivity-fd", tol);
}

VerificationReport verify_minsky(std::size_t samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  SlackTracker tr;
  auto slack = [](const torus::Point& x, const torus::Foliation& f, const torus::Foliation& g) {
    double ef = torus::extremal_length(x, f), eg = torus::extremal_length(x, g);
    return torus::minsky_slack(x, f, g) / (ef * eg);
  };
  for (std::size_t i = 0; i < samples; ++i) {
    torus::Point x(0.0, 1.0);
    torus::Foliation f(1.0, 0.0), g(0.0, 1.0);
    if (i > 0) {
      x = random_point(rng);
      bool integer = i % 2 == 0;
      f = random_foliation(rng, integer);
      g = random_foliation(rng, integer);
    }
    tr.observe_lazy(slack(x, f, g), i, [&] {
      return "tau=" + torus::to_string(x) + " F=" + torus::to_string(f) + " G=" + torus::to_string(g);
    });
  }
  VerificationReport r = tr.report("minsky", tol);
  r.seed = seed;
  return r;
}

VerificationReport verify_levi_identity(std::size_t samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  SlackTracker tr;
  for (std::size_t i = 0; i < samples; ++i) {
    torus::Point x = random_point(rng);
    torus::Foliation f = random_foliation(rng, i % 2 == 0);
    torus::Tangent t{x, random_direction(rng, 0.1, 2.0)};
    double levi = torus::levi_form(x, f, t);
    torus::QuadDiff q = torus::hubbard_masur(x, f);
    torus::QuadDiff eta = torus::eta_v(x, f, t);
    double rhs = 2.0 * std::norm(eta.coeff) * x.im() / std::abs(q.coeff);
    double err1 = std::abs(levi - rhs) / std::abs(levi);
    double e = torus::extremal_length(x, f);
    double err2 = std::abs(e * levi - 2.0 * std::norm(torus::gardiner_derivative(x, f, t))) / (e * levi);
    tr.observe_lazy(-std::max(err1, err2), i, [&] {
      return "tau=" + torus::to_string(x) + " F=" + torus::to_string(f) + " V=" + fmt(t.V);
    });
  }
  VerificationReport r = tr.report("levi-identity", tol);
  r.seed = seed;
  return r;
}

VerificationReport verify_strong_positivity_closed_form(std::size_t samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  SlackTracker tr;
  for (std::size_t i = 0; i < samples; ++i) {
    torus::Point x = random_point(rng);
    torus::Foliation f = random_foliation(rng, i % 2 == 0);
    torus::Tangent t{x, random_direction(rng, 0.1, 2.0)};
    double e = torus::extremal_length(x, f);
    double v = torus::strong_positivity_slack(x, f, t) / (e * torus::levi_form(x, f, t));
    tr.observe_lazy(-std::abs(v), i, [&] {
      return "tau=" + torus::to_string(x) + " F=" + torus::to_string(f) + " V=" + fmt(t.V);
    });
  }
  VerificationReport r = tr.report("strong-positivity", tol);
  r.seed = seed;
  return r;
}

VerificationReport verify_strong_positivity_flat(const std::vector<HoloDisk>& disks, const std::vector<cplx>& grid,
                                                 double tol) {
  SlackTracker tr;
  std::size_t idx = 0;
  torus::Foliation unused(1.0, 0.0);
  for (const HoloDisk& d : disks) {
    if (d.is_torus()) throw DomainError("flat strong positivity needs flat disks");
    for (cplx g : grid) {
      cplx mu = g * d.radius();
      Jet j = closed_form_jet(unused, d, mu);
      double v = (j.e * j.e_mumubar - 2.0 * std::norm(j.e_mu)) / (j.e * j.e_mumubar);
      tr.observe_lazy(-std::abs(v), idx++, [&] { return point_witness(d, mu); });
    }
  }
  return tr.report("strong-positivity-flat", tol);
}

VerificationReport verify_gardiner(std::size_t samples, std::uint64_t seed, double tol) {
  std::vector<HoloDisk> disks = random_torus_disks(samples, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  SlackTracker tr;
  for (std::size_t i = 0; i < disks.size(); ++i) {
    const HoloDisk& d = disks[i];
    torus::Foliation f = random_foliation(rng, i % 2 == 0);
    double h = 1e-4 * d.torus().center.im() / std::abs(d.torus().V);
    h = std::min(h, d.radius() / 20.0);
    cplx fd = fd_d(ScalarField::ext(f), d, 0.0, h);
    torus::Point x = d.torus().center;
    cplx exact = torus::gardiner_derivative(x, f, torus::Tangent{x, d.torus().V});
    double err = std::abs(fd - exact) / std::abs(exact);
    tr.observe_lazy(-err, i, [&] { return d.describe() + " F=" + torus::to_string(f); });
  }
  VerificationReport r = tr.report("gardiner", tol);
  r.seed = seed;
  return r;
}

VerificationReport verify_duality(std::size_t samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  SlackTracker tr;
  for (std::size_t i = 0; i < samples; ++i) {
    torus::Point x = random_point(rng);
    torus::Foliation f = random_foliation(rng, i % 2 == 0);
    torus::Tangent t{x, random_direction(rng, 0.1, 2.0)};
    VerificationReport one = torus::j_derivative_check(x, f, t, 1e-4 * x.im(), tol);
    tr.observe_lazy(one.min_slack, i, [&] {
      return "tau0=" + torus::to_string(x) + " F=" + torus::to_string(f) + " V=" + fmt(t.V);
    });
  }
  VerificationReport r = tr.report("duality", tol);
  r.seed = seed;
  return r;
}

VerificationReport verify_distance_eigen(std::size_t samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  SlackTracker tr;
  for (std::size_t i = 0; i < samples; ++i) {
    torus::Point x = random_point(rng), y = random_point(rng);
    double e = torus::teich_distance(x, y, torus::DistanceMethod::eigen).distance;
    double p = torus::half_poincare_distance(x, y);
    tr.observe_lazy(-std::abs(e - p), i, [&] { return torus::to_string(x) + " -> " + torus::to_string(y); });
  }
  VerificationReport r = tr.report("distance-eigen", tol);
  r.seed = seed;
  return r;
}

VerificationReport verify_distance_brute(std::size_t samples, std::uint64_t seed, long bound, double tol) {
  std::mt19937_64 rng(seed);
  SlackTracker tr;
  std::size_t over = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    torus::Point x = random_point(rng), y = random_point(rng);
    double b = torus::teich_distance(x, y, torus::DistanceMethod::brute, bound).distance;
    double e = torus::teich_distance(x, y, torus::DistanceMethod::eigen).distance;
    double err = std::abs(b - e);
    if (err > tol) ++over;
    tr.observe_lazy(-err, i, [&] { return torus::to_string(x) + " -> " + torus::to_string(y); });
  }
  VerificationReport r = tr.report("distance-brute", tol);
  r.seed = seed;
  r.metrics["bound"] = static_cast<double>(bound);
  r.metrics["samples_over_tolerance"] = static_cast<double>(over);
  return r;
}

std::vector<VerificationReport> verify_period_engine(const std::string& label, const flat::FlatSurface& s,
                                                     std::size_t samples, std::uint64_t seed) {
  std::vector<VerificationReport> out;
  flat::PeriodEngine e(s);
  const auto& cover = e.cover();
  auto single = [&](const std::string& name, double slack, double tol, std::string witness = {}) {
    SlackTracker tr;
    tr.observe(slack, 0, std::move(witness));
    out.push_back(tr.report(label + "/" + name, tol));
  };

  single("ext-area", -std::abs(e.ext() - e.area()) / e.area(), kClosedFormTol,
         "ext=" + fmt(e.ext()) + " area=" + fmt(e.area()));
  single("riemann-hurwitz", cover.connected() ? -std::abs(static_cast<double>(cover.riemann_hurwitz_defect())) : 0.0,
         0.0, "cover genus " + std::to_string(cover.genus()) + " " + flat::to_string(cover.status));
  single("gauss-bonnet", -std::max(std::abs(s.gauss_bonnet_defect()), std::abs(cover.cover.gauss_bonnet_defect())),
         kClosedFormTol);

  {
    flat::CoverHomology h(cover);
    SlackTracker tr;
    const auto& b = e.basis();
    for (std::size_t i = 0; i < b.size(); ++i) {
      cplx p = flat::period(cover, b.cycles[i]), q = flat::period(cover, h.deck(b.cycles[i]));
      tr.observe(-std::abs(p + q), i, "cycle " + std::to_string(i));
    }
    out.push_back(tr.report(label + "/deck-antisymmetry", 0.0));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shear(-2.0, 2.0), stretch(0.2, 4.0), rad(0.0, 1.0), th(0.0, 2.0 * kPi);
  {
    SlackTracker re, ext;
    for (std::size_t k = 0; k < samples; ++k) {
      double a = shear(rng), t = stretch(rng);
      flat::FlatSurface u = flat::vertical_preserving_shear(s, a, t);
      flat::Periods pu = flat::periods(flat::build_double_cover(u), e.basis());
      double worst = 0.0;
      for (std::size_t i = 0; i < pu.values.size(); ++i)
        worst = std::max(worst, std::abs(pu.values[i].real() - e.base_periods().values[i].real()));
      auto w = [&] { return "s=" + fmt(a) + " t=" + fmt(t); };
      re.observe_lazy(-worst, k, w);
      double expected = t * e.area();
      ext.observe_lazy(-std::abs(flat::ext_bilinear(pu, e.basis()) - expected) / expected, k, w);
    }
    out.push_back(re.report(label + "/shear-real-periods", kExactTol));
    out.push_back(ext.report(label + "/shear-ext", kClosedFormTol));
  }
  {
    SlackTracker tr;
    for (std::size_t k = 0; k < samples; ++k) {
      cplx l = std::polar(0.95 * std::sqrt(rad(rng)), th(rng));
      double expected = flat::teich_disk_ext_formula(e.area(), l);
      tr.observe_lazy(-std::abs(e.teich_disk_ext(l) - expected) / expected, k, [&] { return "lambda=" + fmt(l); });
    }
    out.push_back(tr.report(label + "/teich-disk", kClosedFormTol));
  }
  for (auto& r : out) r.seed = seed;
  return out;
}

}  // namespace teich::psh
