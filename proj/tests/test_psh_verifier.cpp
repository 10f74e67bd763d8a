#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <string>

#include "teich/psh_verifier.hpp"

using namespace teich;
using namespace teich::psh;
using torus::Foliation;
using torus::Point;

namespace {

std::shared_ptr<const flat::PeriodEngine> engine(const std::string& name) {
  return std::make_shared<const flat::PeriodEngine>(
      flat::build(flat::load_gluing(std::string(TEICH_DATA_DIR) + "/" + name)));
}

// Ext((1,0)) at tau0 = i + mu makes |mu|^2-type fields unavailable; use a
// flat disk for the trivial fields instead: on the Teichmüller disk with
// area A, Ext = A |1-l|^2/(1-|l|^2).
HoloDisk unit_torus_disk(double r = 0.3) { return HoloDisk::torus_affine(Point(0, 1), 1.0, r); }

}  // namespace

TEST_CASE("disk validation") {
  CHECK_THROWS_AS(HoloDisk::torus_affine(Point(0, 1), 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(HoloDisk::torus_affine(Point(0, 1), 1.0, 0.0), DomainError);
  CHECK_NOTHROW(HoloDisk::torus_affine(Point(0, 1), 0.0, 5.0));
  auto e = engine("pillowcase_1x1.json");
  CHECK_THROWS_AS(HoloDisk::flat_disk(e, 0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(HoloDisk::flat_disk(e, 0.5, 1.0, 0.6), DomainError);
  CHECK_THROWS_AS(HoloDisk::flat_disk(nullptr, 0.0, 1.0, 0.5), DomainError);
  HoloDisk d = unit_torus_disk();
  CHECK_THROWS_AS(d.torus_point(0.31), DomainError);
  CHECK_THROWS_AS(evaluate(ScalarField::distance(Point(0, 1)), HoloDisk::flat_disk(e, 0.0, 1.0, 0.5), 0.0),
                  DomainError);
}

TEST_CASE("fd_dbar_d preconditions") {
  HoloDisk d = unit_torus_disk();
  ScalarField f = ScalarField::ext(Foliation(1, 0));
  CHECK_THROWS_AS(fd_dbar_d(f, d, 0.0, 0.05), DomainError);
  CHECK_THROWS_AS(fd_dbar_d(f, d, 0.29, 0.02), DomainError);
  CHECK_THROWS_AS(fd_dbar_d(f, d, 0.0, 0.0), DomainError);
  CHECK_NOTHROW(fd_dbar_d(f, d, 0.0, 0.02));
}

TEST_CASE("fd_dbar_d on closed-form fields") {
  SUBCASE("log Ext (1,0) at (i, V=1) is 1/4") {
    double v = fd_dbar_d(ScalarField::log_ext(Foliation(1, 0)), unit_torus_disk(), 0.0, 1e-3);
    CHECK(std::abs(v - 0.25) < 1e-6);
  }
  SUBCASE("Ext (1,0) = 1/(1 + Im mu): Levi form 1/2") {
    double v = fd_dbar_d(ScalarField::ext(Foliation(1, 0)), unit_torus_disk(), 0.0, 1e-3);
    CHECK(std::abs(v - 0.5) < 1e-6);
  }
  SUBCASE("flat disk: -log(1-|l|^2) part gives 1 at the origin") {
    auto e = engine("pillowcase_1x1.json");
    HoloDisk d = HoloDisk::flat_disk(e, 0.0, 1.0, 0.5);
    CHECK(std::abs(fd_dbar_d(ScalarField::log_ext(Foliation(1, 0)), d, 0.0, 1e-3) - 1.0) < 1e-6);
  }
  SUBCASE("constant disk gives zero") {
    HoloDisk d = HoloDisk::torus_affine(Point(0.3, 1.2), 0.0, 1.0);
    CHECK(fd_dbar_d(ScalarField::log_ext(Foliation(2, 1)), d, 0.0, 1e-2) == 0.0);
  }
}

TEST_CASE("stencil convergence order: error <= 10 h^2 before extrapolation") {
  // log Ext (1,0) on (i, V=1) is -log(1 + Im mu): analytic Levi form
  // 1/(4 (1 + Im mu)^2).
  HoloDisk d = unit_torus_disk(0.5);
  ScalarField f = ScalarField::log_ext(Foliation(1, 0));
  for (cplx mu : {cplx(0, 0), cplx(0.1, 0.1), cplx(-0.2, -0.1)}) {
    double exact = 0.25 / std::pow(1 + mu.imag(), 2);
    double e1 = std::abs(fd_dbar_d_raw(f, d, mu, 0.02) - exact);
    double e2 = std::abs(fd_dbar_d_raw(f, d, mu, 0.01) - exact);
    CHECK(e1 <= 10 * 0.02 * 0.02);
    CHECK(e2 <= 10 * 0.01 * 0.01);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
    CHECK(std::abs(fd_dbar_d(f, d, mu, 0.02) - exact) < e2 / 10);
  }
  // Ext on the flat disk: A * 2|1-l|^2/(1-|l|^2)^3
  auto e = engine("pillowcase_1x2.json");
  HoloDisk fd = HoloDisk::flat_disk(e, 0.0, 1.0, 0.5);
  for (cplx mu : {cplx(0, 0), cplx(0.2, -0.1)}) {
    double w = 1 - std::norm(mu);
    double exact = 2.0 * 2 * std::norm(1.0 - mu) / (w * w * w);
    double err = std::abs(fd_dbar_d_raw(ScalarField::ext(Foliation(1, 0)), fd, mu, 0.01) - exact);
    CHECK(err <= 10 * 0.01 * 0.01);
  }
}

TEST_CASE("fd_d on closed forms") {
  HoloDisk d = unit_torus_disk();
  cplx g = fd_d(ScalarField::ext(Foliation(1, 0)), d, 0.0, 1e-4);
  CHECK(std::abs(g - cplx(0, 0.5)) < 1e-8);
}

TEST_CASE("log-psh suite") {
  auto disks = random_torus_disks(100, 1);
  VerificationReport r = verify_log_psh(Foliation(1, 0), disks, default_grid());
  CHECK(r.pass);
  CHECK(r.samples == 2500);
  CHECK(r.min_slack > 0.0);
  CHECK(r.metrics.at("max_abs_error_vs_closed_form") < 1e-6);

  // additive constant invariance: t F shifts log Ext by 2 log t
  VerificationReport s = verify_log_psh(Foliation(3, 0), disks, default_grid());
  CHECK(std::abs(s.min_slack - r.min_slack) < 1e-6);
  CHECK(s.witness == r.witness);

  auto flat_disks = random_flat_disks(engine("pillowcase_1x1.json"), 40, 2);
  VerificationReport f = verify_log_psh(Foliation(1, 0), flat_disks, default_grid());
  CHECK(f.pass);
  CHECK(f.min_slack > 0.5);

  VerificationReport tight = verify_log_psh(Foliation(1, 0), disks, default_grid(), 1e-20);
  CHECK(tight.pass);  // slack is strictly positive
}

TEST_CASE("reciprocal suite") {
  std::vector<Foliation> fs{Foliation(1, 0), Foliation(0, 1)};
  ScalarField rho = ScalarField::reciprocal(fs, {1, 1}, 1);
  CHECK(std::abs(evaluate(rho, unit_torus_disk(), 0.0) + 1.0 / 3.0) < 1e-12);
  std::vector<HoloDisk> at_i;
  for (cplx V : {cplx(1, 0), cplx(0, 1), cplx(0.5, 0.5), cplx(-0.3, 0.8)})
    at_i.push_back(HoloDisk::torus_affine(Point(0, 1), V, 0.8 / std::abs(V)));
  VerificationReport r = verify_reciprocal_psh(fs, {1, 1}, 1, at_i);
  CHECK(r.pass);
  CHECK(r.metrics.at("bounds_min_slack") > 0);

  VerificationReport one = verify_reciprocal_psh({Foliation(2, 1)}, {1}, 1, random_torus_disks(50, 3));
  CHECK(one.pass);

  std::vector<HoloDisk> constant{HoloDisk::torus_affine(Point(0, 1), 0.0, 1.0)};
  VerificationReport z = verify_reciprocal_psh(fs, {1, 1}, 1, constant);
  CHECK(z.metrics.at("psh_min_slack") == 0.0);

  CHECK_THROWS_AS(ScalarField::reciprocal(fs, {0, 0}, 1), DomainError);
  CHECK_THROWS_AS(ScalarField::reciprocal(fs, {1}, 1), DomainError);
  CHECK_THROWS_AS(ScalarField::reciprocal(fs, {1, 1}, -1), DomainError);

  auto e = engine("sphere_3pi_5poles.json");
  VerificationReport f = verify_reciprocal_psh({Foliation(1, 0)}, {1}, 1, random_flat_disks(e, 20, 4));
  CHECK(f.pass);
}

TEST_CASE("properness proxy") {
  VerificationReport r = properness_proxy(Point(0, 1), Foliation(1, 0), Foliation(0, 1));
  CHECK(r.pass);
  CHECK(r.metrics.at("m0") > 0.9);
  CHECK(r.samples == 512 * 5);
  // a single foliation cannot be proper: m0 collapses
  VerificationReport bad = properness_proxy(Point(0, 1), Foliation(1, 0), Foliation(1, 0));
  CHECK_FALSE(bad.pass);
}

TEST_CASE("distance sub-mean-value") {
  Point i(0, 1);
  ScalarField d = ScalarField::distance(i);
  HoloDisk at_i = unit_torus_disk(0.5);
  CHECK(evaluate(d, at_i, 0.0) == doctest::Approx(0.0));
  CHECK(mean_value_slack(d, at_i, 0.1, 64) > 0);

  HoloDisk away = HoloDisk::torus_affine(Point(0, 2), cplx(1, 1), 1.0);
  VerificationReport r = verify_distance_psh(i, {at_i, away});
  CHECK(r.pass);

  // smooth point: slack ~ r'^2 * Levi, vanishes at rate 2
  double s1 = mean_value_slack(d, away, 0.2, 128), s2 = mean_value_slack(d, away, 0.1, 128);
  CHECK(s1 > 0);
  CHECK(s1 / s2 == doctest::Approx(4.0).epsilon(0.05));

  MeanValueOptions few;
  few.nodes = 16;
  CHECK_THROWS_AS(verify_distance_psh(i, {at_i}, few), DomainError);

  VerificationReport many = verify_distance_psh(Point(0.2, 0.9), random_torus_disks(200, 5));
  CHECK(many.pass);
}

TEST_CASE("horoball maximum principle") {
  HoloDisk d = unit_torus_disk(0.3);
  VerificationReport r = verify_horoball_diskconvex(Foliation(1, 0), 2.0, {d}, default_grid());
  CHECK(r.pass);
  CHECK(r.min_slack > 0);
  CHECK(r.metrics.at("boundary_in_horoball") == 1);
  CHECK(r.metrics.at("interior_in_horoball") == 1);
  // boundary max is 1/(1 - 0.3)
  ScalarField ext = ScalarField::ext(Foliation(1, 0));
  CHECK(evaluate(ext, d, cplx(0, -0.3)) == doctest::Approx(1 / 0.7).epsilon(1e-14));

  VerificationReport c =
      verify_horoball_diskconvex(Foliation(1, 0), 2.0, {HoloDisk::torus_affine(Point(0, 1), 0.0, 1.0)}, default_grid());
  CHECK(c.pass);
  CHECK(c.min_slack == 0.0);

  auto e = engine("pillowcase_1x1.json");
  VerificationReport f =
      verify_horoball_diskconvex(Foliation(1, 0), 10.0, {HoloDisk::flat_disk(e, 0.0, 1.0, 0.5)}, default_grid());
  CHECK(f.pass);
  CHECK(verify_horoball_diskconvex(Foliation(2, 1), 1.0, random_torus_disks(100, 6), default_grid()).pass);
}

TEST_CASE("currents chain") {
  VerificationReport r = verify_currents_inequality(Foliation(1, 0), {unit_torus_disk()}, {cplx(0, 0)});
  CHECK(r.pass);
  CHECK(r.metrics.at("torus_equality_max_gap") < 1e-12);
  VerificationReport many = verify_currents_inequality(Foliation(1, 2), random_torus_disks(50, 7), default_grid());
  CHECK(many.pass);
  auto e = engine("pillowcase_1x1.json");
  VerificationReport f =
      verify_currents_inequality(Foliation(1, 0), random_flat_disks(e, 20, 8), default_grid());
  CHECK(f.pass);
  VerificationReport z = verify_currents_inequality(Foliation(1, 0), {HoloDisk::torus_affine(Point(0, 1), 0.0, 1.0)},
                                                    default_grid());
  CHECK(z.pass);
  CHECK(z.min_slack == 0.0);
}

TEST_CASE("strong positivity") {
  CHECK(verify_strong_positivity_closed_form(1000, 9).pass);
  auto e = engine("pillowcase_1x1.json");
  auto flat_disks = random_flat_disks(e, 20, 10);
  CHECK(verify_strong_positivity_flat(flat_disks, default_grid()).pass);
  CHECK(verify_strong_positivity_fd(Foliation(1, 0), flat_disks, default_grid()).pass);
  CHECK(verify_strong_positivity_fd(Foliation(3, -2), random_torus_disks(50, 11), default_grid()).pass);
}

TEST_CASE("minsky") {
  VerificationReport r = verify_minsky(10000, 7);
  CHECK(r.pass);
  CHECK(r.min_slack >= 0.0);
  CHECK(r.seed == 7);
  CHECK(r.witness.find("F=1,0 G=0,1") != std::string::npos);
}

TEST_CASE("closed-form identities and derivative sweeps") {
  CHECK(verify_levi_identity(2000, 1).pass);
  CHECK(verify_gardiner(300, 2).pass);
  CHECK(verify_duality(300, 3).pass);
  CHECK(verify_distance_eigen(300, 4).pass);
}

TEST_CASE("reports are deterministic under a seed") {
  VerificationReport a = verify_gardiner(100, 42), b = verify_gardiner(100, 42);
  CHECK(a.min_slack == b.min_slack);
  CHECK(a.witness == b.witness);
  auto d1 = random_torus_disks(10, 5), d2 = random_torus_disks(10, 5);
  for (std::size_t k = 0; k < d1.size(); ++k) CHECK(d1[k].describe() == d2[k].describe());
}

TEST_CASE("default grid") {
  auto g = default_grid();
  CHECK(g.size() == 25);
  for (cplx z : g) CHECK(std::abs(z) <= 0.5 + 1e-15);
}

TEST_CASE("reciprocal bounds on a grid") {
  std::vector<Foliation> fs{Foliation(1, 0), Foliation(0, 1)};
  VerificationReport r = reciprocal_grid_bounds(fs, {1, 1}, 1, -1, 1, 0.5, 2, 50, 50);
  CHECK(r.pass);
  CHECK(r.samples == 2500);
  CHECK(r.min_slack > 0);
  VerificationReport one = reciprocal_grid_bounds(fs, {1, 1}, 1, 0, 0, 1, 1, 1, 1);
  CHECK(one.min_slack == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(reciprocal_grid_bounds(fs, {1, 1}, 1, -1, 1, -1, 2, 5, 5), DomainError);
}

TEST_CASE("period engine checks on the corpus") {
  for (const char* f : {"pillowcase_1x1.json", "pillowcase_1x2.json", "sphere_3pi_5poles.json",
                        "torus_2zeros_2poles.json"}) {
    CAPTURE(f);
    auto s = flat::build(flat::load_gluing(std::string(TEICH_DATA_DIR) + "/" + f));
    auto reps = verify_period_engine("x", s, 30, 1);
    CHECK(reps.size() == 7);
    for (const auto& r : reps) {
      CAPTURE(r.name);
      CHECK(r.pass);
      CHECK(r.seed == 1);
    }
  }
}
