#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "teich/flat_surface.hpp"

using namespace teich;
using namespace teich::flat;

namespace {

constexpr double kPi = std::numbers::pi;

FlatSurface load(const std::string& name) { return build(load_gluing(std::string(TEICH_DATA_DIR) + "/" + name)); }

std::vector<int> multiples(const FlatSurface& s) {
  std::vector<int> m;
  for (const auto& c : s.cone_points()) m.push_back(c.multiple);
  std::sort(m.begin(), m.end());
  return m;
}

GluingData square_torus() {
  return {{{0.0, 1.0, cplx(1, 1), cplx(0, 1)}}, {{{0, 0}, {0, 2}, false}, {{0, 1}, {0, 3}, false}}};
}

std::string error_of(const GluingData& g) {
  try {
    build(g);
  } catch (const GluingError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("square torus") {
  FlatSurface s = load("square_torus.json");
  CHECK(s.genus() == 1);
  CHECK(s.num_vertices() == 1);
  CHECK(s.cone_points()[0].multiple == 2);
  CHECK(s.cone_points()[0].angle == doctest::Approx(2 * kPi));
  CHECK(s.punctures() == 0);
  CHECK(s.area() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(s.has_flips());
  CHECK(check_generic(s).generic);
}

TEST_CASE("pillowcases") {
  for (auto [file, area] : {std::pair{"pillowcase_1x1.json", 1.0}, std::pair{"pillowcase_1x2.json", 2.0}}) {
    FlatSurface s = load(file);
    CHECK(s.genus() == 0);
    CHECK(multiples(s) == std::vector<int>{1, 1, 1, 1});
    CHECK(s.punctures() == 4);
    CHECK(s.area() == doctest::Approx(area).epsilon(1e-15));
    CHECK(s.has_flips());
    CHECK(check_generic(s).generic);
  }
}

TEST_CASE("genus-0 surface with angles 3pi and five poles") {
  FlatSurface s = load("sphere_3pi_5poles.json");
  CHECK(s.genus() == 0);
  CHECK(multiples(s) == std::vector<int>{1, 1, 1, 1, 1, 3});
  CHECK(s.punctures() == 5);
  CHECK(s.area() == doctest::Approx(7.5));
  CHECK(check_generic(s).generic);
}

TEST_CASE("genus-1 surface with two simple zeros and two poles") {
  FlatSurface s = load("torus_2zeros_2poles.json");
  CHECK(s.genus() == 1);
  std::vector<int> m = multiples(s);
  m.erase(std::remove(m.begin(), m.end(), 2), m.end());
  CHECK(m == std::vector<int>{1, 1, 3, 3});
  CHECK(check_generic(s).generic);
}

TEST_CASE("L-shaped genus-2 surface is not generic") {
  FlatSurface s = load("genus2_L.json");
  CHECK(s.genus() == 2);
  CHECK(multiples(s) == std::vector<int>{6});
  GenericityResult g = check_generic(s);
  CHECK_FALSE(g.generic);
  REQUIRE(g.witnesses.size() == 1);
  CHECK(s.cone_points()[g.witnesses[0]].multiple == 6);
  CHECK(s.area() == doctest::Approx(3.0));
}

TEST_CASE("Gauss-Bonnet holds on the corpus") {
  for (const char* f : {"square_torus.json", "pillowcase_1x1.json", "pillowcase_1x2.json", "sphere_3pi_5poles.json",
                        "torus_2zeros_2poles.json", "genus2_L.json"}) {
    CAPTURE(f);
    FlatSurface s = load(f);
    CHECK(std::abs(s.gauss_bonnet_defect()) < 1e-9);
    CHECK(s.euler_characteristic() == 2 - 2 * s.genus());
    CHECK(static_cast<long>(s.num_vertices()) - static_cast<long>(s.num_edges()) + static_cast<long>(s.num_faces()) ==
          s.euler_characteristic());
  }
}

TEST_CASE("json round trip") {
  GluingData g = load_gluing(std::string(TEICH_DATA_DIR) + "/torus_2zeros_2poles.json");
  GluingData h = gluing_from_json(gluing_to_json(g));
  REQUIRE(h.polygons.size() == g.polygons.size());
  CHECK(h.polygons[0] == g.polygons[0]);
  REQUIRE(h.pairings.size() == g.pairings.size());
  for (std::size_t i = 0; i < g.pairings.size(); ++i) {
    CHECK(h.pairings[i].a == g.pairings[i].a);
    CHECK(h.pairings[i].b == g.pairings[i].b);
    CHECK(h.pairings[i].flip == g.pairings[i].flip);
  }
}

TEST_CASE("mismatched edges name the pairing") {
  try {
    load("mismatched_edges.json");
    FAIL("expected a gluing error");
  } catch (const GluingError& e) {
    std::string m = e.what();
    CHECK(m.find("pairing 0") != std::string::npos);
    CHECK(m.find("lengths differ") != std::string::npos);
  }
}

TEST_CASE("gluing validation errors") {
  GluingData g = square_torus();
  CHECK(error_of(g).empty());

  GluingData cw = g;
  std::reverse(cw.polygons[0].begin(), cw.polygons[0].end());
  CHECK(error_of(cw).find("counter-clockwise") != std::string::npos);

  GluingData bowtie{{{0.0, cplx(1, 1), 1.0, cplx(0, 1)}}, {}};
  CHECK_THROWS_AS(build(bowtie), GluingError);

  GluingData wrong_dir = g;
  wrong_dir.pairings[0].flip = true;
  CHECK(error_of(wrong_dir).find("flip gluing needs equal edge vectors") != std::string::npos);

  GluingData self = g;
  self.pairings[0].b = self.pairings[0].a;
  CHECK(error_of(self).find("cannot be glued to itself") != std::string::npos);

  GluingData twice = g;
  twice.pairings[1].a = {0, 0};
  CHECK(error_of(twice).find("already glued") != std::string::npos);

  GluingData missing = g;
  missing.pairings.pop_back();
  CHECK(error_of(missing).find("not glued") != std::string::npos);

  GluingData range = g;
  range.pairings[0].b = {0, 9};
  CHECK(error_of(range).find("out of range") != std::string::npos);

  GluingData two = g;
  two.polygons.push_back({cplx(5, 0), cplx(6, 0), cplx(6, 1), cplx(5, 1)});
  two.pairings.push_back({{1, 0}, {1, 2}, false});
  two.pairings.push_back({{1, 1}, {1, 3}, false});
  CHECK(error_of(two).find("disconnected") != std::string::npos);
  CHECK(build(two, true).components() == 2);
  CHECK(build(two, true).genus() == 2);

  CHECK_THROWS_AS(gluing_from_json(nlohmann::json::parse(R"({"polygons": 3})")), GluingError);
  CHECK_THROWS_AS(load_gluing("/nonexistent/file.json"), GluingError);
}

TEST_CASE("linear maps and deformations") {
  FlatSurface s = load("pillowcase_1x1.json");
  CHECK_THROWS_AS(teich_disk_map(1.0), DomainError);
  CHECK_THROWS_AS(teich_disk_map(cplx(0.6, 0.8)), DomainError);
  CHECK_THROWS_AS(vertical_shear_map(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(scale(s, -1.0), DomainError);

  RealLinearMap id = vertical_shear_map(0.0, 1.0);
  CHECK(std::abs(id(cplx(0.3, 0.7)) - cplx(0.3, 0.7)) < 1e-15);
  RealLinearMap sh = vertical_shear_map(0.5, 2.0);
  CHECK(std::abs(sh(cplx(1.0, 1.0)) - cplx(1.0, 2.5)) < 1e-15);

  for (cplx l : {cplx(0, 0), cplx(0.5, 0), cplx(std::tanh(1.0), 0), cplx(-0.3, 0.6)}) {
    FlatSurface d = teich_disk_deform(s, l);
    CHECK(d.area() == doctest::Approx(s.area() * (1 - std::norm(l))).epsilon(1e-12));
    CHECK(multiples(d) == multiples(s));
    // rescaled form c dw pulls back to something with real part dz
    cplx c = teich_disk_rescaling(l);
    cplx dz(0.37, -1.2);
    cplx dw = teich_disk_map(l)(dz);
    CHECK(std::abs((c * dw).real() - dz.real()) < 1e-14);
  }
  CHECK(teich_disk_ext_formula(1.0, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(teich_disk_ext_formula(2.0, std::tanh(1.0)) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));

  FlatSurface t = vertical_preserving_shear(s, 0.7, 3.0);
  CHECK(t.area() == doctest::Approx(3.0));
  CHECK(scale(s, 2.0).area() == doctest::Approx(4.0));
}
