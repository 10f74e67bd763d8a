#include "teich/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace teich::torus {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_base(const Point& x, const Tangent& t) {
  if (!(t.base == x)) throw DomainError("tangent vector is not based at the evaluation point");
}

double norm2(cplx z) { return std::norm(z); }

// Q_tau(a, b) = |a + b tau|^2 / Im tau as the symmetric matrix
// [[m11, m12], [m12, m22]]; det = 1.
struct BinaryForm {
  double m11, m12, m22;
  explicit BinaryForm(const Point& x)
      : m11(1.0 / x.im()), m12(x.tau().real() / x.im()), m22(norm2(x.tau()) / x.im()) {}
  double operator()(double a, double b) const { return m11 * a * a + 2.0 * m12 * a * b + m22 * b * b; }
  double det() const { return m11 * m22 - m12 * m12; }
};

}  // namespace

Point::Point(cplx tau) : tau_(tau) {
  if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
    throw DomainError("tau must be finite");
  if (tau.imag() <= kMinImaginaryPart)
    throw DomainError("tau must lie in the upper half-plane (Im tau > 1e-12)");
}

Foliation::Foliation(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("foliation weights must be finite");
  if (a == 0.0 && b == 0.0) throw DomainError("foliation (0, 0) is not a measured foliation");
  if (b_ < 0.0 || (b_ == 0.0 && a_ < 0.0)) {
    a_ = -a_;
    b_ = -b_;
  }
  // normalize -0.0 so equality and printing are deterministic
  if (a_ == 0.0) a_ = 0.0;
  if (b_ == 0.0) b_ = 0.0;
}

double intersection(const Foliation& f, const Foliation& g) {
  return std::abs(f.a() * g.b() - f.b() * g.a());
}

double extremal_length(const Point& x, const Foliation& f) {
  return norm2(f.direction(x.tau())) / x.im();
}

QuadDiff hubbard_masur(const Point& x, const Foliation& f) {
  const cplx w = f.direction(std::conj(x.tau()));
  return {-(w * w) / (x.im() * x.im()), x};
}

double levi_form(const Point& x, const Foliation& f, const Tangent& t) {
  require_base(x, t);
  const double y = x.im();
  return norm2(f.direction(x.tau())) * norm2(t.V) / (2.0 * y * y * y);
}

QuadDiff eta_v(const Point& x, const Foliation& f, const Tangent& t) {
  require_base(x, t);
  const double y = x.im();
  return {-kI * norm2(f.direction(x.tau())) * std::conj(t.V) / (2.0 * y * y * y), x};
}

cplx gardiner_derivative(const Point& x, const Foliation& f, const Tangent& t) {
  require_base(x, t);
  const cplx w = f.direction(std::conj(x.tau()));
  const double y = x.im();
  return kI * t.V * w * w / (2.0 * y * y);
}

double strong_positivity_slack(const Point& x, const Foliation& f, const Tangent& t) {
  const double ext = extremal_length(x, f);
  return ext * levi_form(x, f, t) - 2.0 * norm2(gardiner_derivative(x, f, t));
}

double minsky_slack(const Point& x, const Foliation& f, const Foliation& g) {
  const double i = intersection(f, g);
  return extremal_length(x, f) * extremal_length(x, g) - i * i;
}

double half_poincare_distance(const Point& x1, const Point& x2) {
  // cosh d_H = 1 + |t1 - t2|^2 / (2 y1 y2)  <=>  d_H = 2 asinh(|t1 - t2| / (2 sqrt(y1 y2)))
  return std::asinh(std::abs(x1.tau() - x2.tau()) / (2.0 * std::sqrt(x1.im() * x2.im())));
}

namespace {

double distance_eigen(const Point& x1, const Point& x2) {
  const BinaryForm m1(x1), m2(x2);
  // det(M2 - lambda M1) = det(M1) lambda^2 - tr(adj(M1) M2) lambda + det(M2).
  // Write the middle coefficient as 2 det(M1) (1 + delta); delta is formed
  // from entry differences so that identical points give delta == 0 exactly.
  const double d1 = m1.det();
  const double excess = m1.m22 * (m2.m11 - m1.m11) + m1.m11 * (m2.m22 - m1.m22) -
                        2.0 * m1.m12 * (m2.m12 - m1.m12);
  const double delta = std::max(0.0, excess / (2.0 * d1));
  // lambda_max = 1 + delta + sqrt((1 + delta)^2 - det(M2)/det(M1)); the ratio is 1 up to rounding.
  const double detratio = m2.det() / d1;
  const double disc = std::max(0.0, delta * (2.0 + delta) + (1.0 - detratio));
  const double lambda_minus_one = delta + std::sqrt(disc);
  return 0.5 * std::log1p(lambda_minus_one);
}

DistanceResult distance_brute(const Point& x1, const Point& x2, long bound) {
  const BinaryForm q1(x1), q2(x2);
  DistanceResult best;
  double best_ratio = -1.0;
  for (long q = 0; q <= bound; ++q) {
    for (long p = -bound; p <= bound; ++p) {
      if (q == 0 && p != 1) continue;
      if (std::gcd(p < 0 ? -p : p, q) != 1) continue;
      const double a = static_cast<double>(p), b = static_cast<double>(q);
      const double ratio = q2(a, b) / q1(a, b);
      const bool lex_smaller = p < best.p || (p == best.p && q < best.q);
      if (ratio > best_ratio || (ratio == best_ratio && lex_smaller)) {
        best_ratio = ratio;
        best.p = p;
        best.q = q;
      }
    }
  }
  best.distance = 0.5 * std::log(best_ratio);
  return best;
}

}  // namespace

DistanceResult teich_distance(const Point& x1, const Point& x2, DistanceMethod method, long bound) {
  if (method == DistanceMethod::eigen) return {distance_eigen(x1, x2), 0, 0};
  if (bound < 1) throw DomainError("brute-force bound must be at least 1");
  return distance_brute(x1, x2, bound);
}

QuadDiff j_map(const Point& x0, const Foliation& f, const Point& x) {
  const double a = f.a(), b = f.b();
  const cplx t = x.tau();
  const double num_real = -(a * t.real() + b * norm2(t));
  const cplx w = (num_real + (a + b * t.real()) * std::conj(x0.tau())) / (x.im() * x0.im());
  return {w * w, x0};
}

VerificationReport j_derivative_check(const Point& x0, const Foliation& f, const Tangent& t,
                                      double h, double tolerance) {
  require_base(x0, t);
  if (!(h > 0.0) || !(h < x0.im() / 10.0))
    throw DomainError("step h must lie in (0, Im(tau0)/10)");

  const cplx tau0 = x0.tau();
  auto J = [&](cplx tau) { return j_map(x0, f, Point(tau)).coeff; };
  auto directional = [&](double step) {
    const cplx dx = (J(tau0 + step) - J(tau0 - step)) / (2.0 * step);
    const cplx dy = (J(tau0 + kI * step) - J(tau0 - kI * step)) / (2.0 * step);
    return t.V.real() * dx + t.V.imag() * dy;
  };
  const cplx fd = (4.0 * directional(h / 2.0) - directional(h)) / 3.0;
  const cplx expected = -4.0 * eta_v(x0, f, t).coeff;

  const double scale = std::abs(expected);
  const cplx diff = fd - expected;
  double err = std::max(std::abs(diff.real()), std::abs(diff.imag()));
  if (scale > 0.0) err /= scale;

  VerificationReport r;
  r.name = "j-derivative";
  r.samples = 1;
  r.min_slack = -err;
  r.tolerance = tolerance;
  std::ostringstream w;
  w << "tau0=" << to_string(x0) << " F=" << to_string(f) << " V=" << t.V.real() << ","
    << t.V.imag() << " h=" << h;
  r.witness = w.str();
  r.metrics["fd_re"] = fd.real();
  r.metrics["fd_im"] = fd.imag();
  r.metrics["expected_re"] = expected.real();
  r.metrics["expected_im"] = expected.imag();
  r.finalize();
  return r;
}

std::string to_string(const Point& x) {
  std::ostringstream s;
  s.precision(17);
  s << x.tau().real() << "," << x.tau().imag();
  return s.str();
}

std::string to_string(const Foliation& f) {
  std::ostringstream s;
  s.precision(17);
  s << f.a() << "," << f.b();
  return s.str();
}

}  // namespace teich::torus
