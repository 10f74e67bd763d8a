#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "teich/cli.hpp"

using namespace teich;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = cli::run(args, o, e);
  return {code, o.str(), e.str()};
}

std::string data(const std::string& f) { return std::string(TEICH_DATA_DIR) + "/" + f; }

std::filesystem::path tmp(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "teich_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string& header) {
  std::istringstream in(text);
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("value commands") {
  CHECK(run({"ext", "--tau", "0,1", "--fol", "1,0"}).out == "1\n");
  CHECK(run({"dist", "--from", "0,1", "--to", "0,2"}).out == "0.346573590279973\n");
  CHECK(run({"levi", "--tau", "0,1", "--fol", "1,0", "--v", "1,0"}).out == "0.5\n");
  CHECK(run({"eta", "--tau", "0,1", "--fol", "1,0", "--v", "1,0"}).out == "0,-0.5\n");
  CHECK(run({"jmap", "--tau0", "0,1", "--fol", "1,0", "--tau", "0,2"}).out == "-0.25,0\n");
  CHECK(run({"dist", "--from", "0,1", "--to", "0,2", "--method", "brute", "--bound", "10"}).out ==
        "0.346573590279973\n");
  CHECK(run({"ext", "--tau", "-1,1", "--fol", "0,1"}).out == "2\n");

  Result j = run({"ext", "--tau", "0,2", "--fol", "1,0", "--format", "json"});
  CHECK(json::parse(j.out)["value"].get<double>() == 0.5);
  CHECK(run({"ext", "--tau", "0,2", "--fol", "1,0", "--format", "csv"}).out == "value\n0.5\n");
}

TEST_CASE("usage errors exit 2 with one line") {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"ext", "--tau", "0,0", "--fol", "1,0"},
        {"ext", "--tau", "x,1", "--fol", "1,0"},
        {"ext", "--tau", "0,1,2", "--fol", "1,0"},
        {"ext", "--tau", "0,1", "--fol", "0,0"},
        {"ext", "--tau", "0,1"},
        {"dist", "--from", "0,1", "--to", "0,2", "--method", "brute", "--bound", "0"},
        {"dist", "--from", "0,1", "--to", "0,2", "--method", "magic"},
        {"verify", "bogus"},
        {"verify", "minsky", "--samples", "0"},
        {"grid", "--region", "-1,1,0,2"},
        {"grid", "--field", "nope"},
        {"periods", "/nonexistent.json"},
        {"frobnicate"},
        {}}) {
    CAPTURE(args.size());
    Result r = run(args);
    CHECK(r.code == cli::kExitUsage);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
}

TEST_CASE("help exits 0") {
  Result r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verify") != std::string::npos);
}

TEST_CASE("parsers") {
  CHECK(cli::parse_complex(" 1.5, -2") == cplx(1.5, -2));
  CHECK_THROWS_AS(cli::parse_complex("1,"), DomainError);
  CHECK_THROWS_AS(cli::parse_complex(""), DomainError);
  CHECK_THROWS_AS(cli::parse_complex("nan,1"), DomainError);
  CHECK(cli::parse_foliation("-1,-2") == torus::Foliation(1, 2));
  CHECK(cli::format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(cli::format_number(-0.0) == "0");
}

TEST_CASE("periods command") {
  Result r = run({"periods", data("pillowcase_1x1.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("ext_bilinear: 1\n") != std::string::npos);
  CHECK(r.out.find("area: 1\n") != std::string::npos);
  CHECK(r.out.find("cover: connected, genus 1, 4 branch points") != std::string::npos);
  CHECK(r.out.find("odd rank: 2") != std::string::npos);

  Result j = run({"periods", data("sphere_3pi_5poles.json"), "--format", "json"});
  CHECK(j.code == 0);
  json doc = json::parse(j.out);
  CHECK(doc["odd_rank"] == 4);
  CHECK(doc["relative_slack"].get<double>() < 1e-9);
  CHECK(doc["cover_genus"] == 2);

  Result t = run({"periods", data("square_torus.json")});
  CHECK(t.code == 0);
  CHECK(t.out.find("cover: orientable") != std::string::npos);
  CHECK(t.out.find("area: 1\n") != std::string::npos);
  CHECK(run({"periods", data("square_torus.json"), "--require-connected"}).code == cli::kExitDisconnected);

  Result g = run({"periods", data("genus2_L.json")});
  CHECK(g.out.find("generic: no (witness angles / pi: 6)") != std::string::npos);

  Result bad = run({"periods", data("mismatched_edges.json")});
  CHECK(bad.code == cli::kExitUsage);
  CHECK(bad.err.find("pairing 0 (polygon 0 edge 0 <-> polygon 0 edge 1") != std::string::npos);
}

TEST_CASE("verify: exit codes and tolerance plumbing") {
  Result m = run({"verify", "minsky", "--samples", "10000", "--seed", "7"});
  CHECK(m.code == 0);
  CHECK(m.out.find("PASS  minsky  samples=10000  min_slack=0") != std::string::npos);

  Result tight = run({"verify", "log-psh", "--tol", "1e-20"});
  CHECK(tight.code == cli::kExitCheckFailed);
  CHECK(tight.out.find("overall: FAIL") != std::string::npos);

  Result all = run({"verify", "all", "--seed", "42", "--format", "json"});
  CHECK(all.code == 0);
  json doc = json::parse(all.out);
  CHECK(doc["schema"] == "1");
  CHECK(doc["results"].size() >= 8);
  CHECK(doc["invocation"]["seed"] == 42);
  CHECK(doc["invocation"]["defaults"]["brute_bound"] == 100);
  CHECK(doc["invocation"]["defaults"]["grid"] == "50x50");
  for (const auto& s : doc["results"]) CHECK(s["pass"].get<bool>());
}

TEST_CASE("verify: report file round trip and determinism") {
  auto p1 = tmp("a.json"), p2 = tmp("b.json");
  Result a = run({"verify", "all", "--seed", "5", "--out", p1.string()});
  Result b = run({"verify", "all", "--seed", "5", "--out", p1.string()});
  std::filesystem::copy_file(p1, p2, std::filesystem::copy_options::overwrite_existing);
  Result c = run({"verify", "all", "--seed", "5", "--out", p1.string()});
  CHECK(a.out == b.out);
  CHECK(slurp(p1) == slurp(p2));
  json doc = json::parse(slurp(p1));
  CHECK(cli::summarize(doc) == c.out);
  for (const auto& s : doc["results"])
    for (const auto& r : s["checks"]) CHECK(cli::report_to_json(cli::report_from_json(r)) == r);

  Result other = run({"verify", "all", "--seed", "6", "--format", "json"});
  CHECK(json::parse(other.out)["results"] != doc["results"]);

  Result csv = run({"verify", "gardiner", "--format", "csv", "--samples", "20"});
  CHECK(csv.out.rfind("suite,name,samples,min_slack,tolerance,pass,seed,witness\n", 0) == 0);
  CHECK(csv.out.find("\r") == std::string::npos);
}

TEST_CASE("grid command") {
  Result r = run({"grid", "--field", "logext", "--fol", "1,0", "--region", "-1,1,0.5,2", "--res", "50"});
  CHECK(r.code == 0);
  std::string header;
  auto rows = parse_csv(r.out, header);
  CHECK(header == "re,im,value");
  REQUIRE(rows.size() == 2500);
  for (const auto& row : rows) CHECK(std::abs(row[2] + std::log(row[1])) < 1e-12);
  // row-major: x varies fastest
  CHECK(rows[1][1] == rows[0][1]);
  CHECK(rows[50][1] > rows[0][1]);

  Result rho = run({"grid", "--field", "rho", "--fol", "1,0", "--fol2", "0,1", "--c", "1"});
  for (const auto& row : parse_csv(rho.out, header)) {
    CHECK(row[2] > -1.0);
    CHECK(row[2] < 0.0);
  }

  Result one = run({"grid", "--field", "logext", "--region", "0,0,1,1", "--res", "1"});
  CHECK(one.out == "re,im,value\n0,1,0\n");

  Result d = run({"grid", "--field", "dist", "--tau0", "0,1", "--region", "0,0,2,2", "--res", "1", "--format", "json"});
  json doc = json::parse(d.out);
  CHECK(std::abs(doc["points"][0][2].get<double>() - 0.5 * std::log(2.0)) < 1e-12);

  auto path = tmp("grid.csv");
  CHECK(run({"grid", "--res", "2", "--out", path.string()}).code == 0);
  CHECK(slurp(path).rfind("re,im,value\n", 0) == 0);
}
