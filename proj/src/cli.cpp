#include "teich/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "teich/flat_surface.hpp"
#include "teich/homology.hpp"
#include "teich/psh_verifier.hpp"

#ifndef TEICH_DATA_DIR
#define TEICH_DATA_DIR "data"
#endif

namespace teich::cli {

namespace {

using nlohmann::json;

struct UsageError : DomainError {
  using DomainError::DomainError;
};

std::vector<double> parse_list(const std::string& s, std::size_t n, const char* what) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size() || !std::isfinite(v))
      throw UsageError(std::string("cannot parse ") + what + " '" + s + "'");
    out.push_back(v);
  }
  if (!s.empty() && s.back() == ',') throw UsageError(std::string("cannot parse ") + what + " '" + s + "'");
  if (out.size() != n)
    throw UsageError(std::string(what) + " '" + s + "' needs " + std::to_string(n) + " comma-separated numbers");
  return out;
}

std::string format_complex(cplx z) { return format_number(z.real()) + "," + format_number(z.imag()); }

struct Settings {
  std::string out_path;
  std::string format = "text";
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::optional<std::size_t> samples;
  std::string data_dir = default_data_dir().string();
};

json defaults_json() {
  return json{{"fd_step_second_derivative", "1e-3 * Im(tau0) / |V|"},
              {"fd_step_first_derivative", "1e-4 * Im(tau0)"},
              {"tolerance_exact", psh::kExactTol},
              {"tolerance_closed_form", psh::kClosedFormTol},
              {"tolerance_finite_difference", psh::kFiniteDifferenceTol},
              {"brute_bound", torus::kDefaultBruteBound},
              {"grid", "50x50"},
              {"seed", 0},
              {"disk_grid_points", psh::default_grid().size()}};
}

json invocation_json(const std::vector<std::string>& args, const Settings& s) {
  json j{{"argv", args}, {"seed", s.seed}, {"format", s.format}, {"defaults", defaults_json()}};
  j["samples"] = s.samples ? json(*s.samples) : json(nullptr);
  j["tol"] = s.tol ? json(*s.tol) : json(nullptr);
  j["data_dir"] = s.data_dir;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << content;
  if (!f) throw UsageError("failed writing " + path);
}

// ---- verify suites ----

struct SuiteContext {
  const Settings& s;
  std::map<std::string, std::shared_ptr<const flat::PeriodEngine>> engines;

  double tol(double fallback) const { return s.tol.value_or(fallback); }
  std::size_t n(std::size_t fallback) const { return s.samples.value_or(fallback); }

  std::shared_ptr<const flat::PeriodEngine> engine(const std::string& file) {
    auto it = engines.find(file);
    if (it != engines.end()) return it->second;
    auto e = std::make_shared<const flat::PeriodEngine>(
        flat::build(flat::load_gluing(std::filesystem::path(s.data_dir) / file)));
    engines.emplace(file, e);
    return e;
  }
};

const std::vector<std::string> kFlatCorpus{"pillowcase_1x1.json", "pillowcase_1x2.json", "sphere_3pi_5poles.json"};

std::string stem(const std::string& file) { return std::filesystem::path(file).stem().string(); }

std::vector<psh::HoloDisk> flat_family(SuiteContext& ctx, std::size_t per_surface, std::uint64_t seed) {
  std::vector<psh::HoloDisk> out;
  for (std::size_t k = 0; k < kFlatCorpus.size(); ++k) {
    auto d = psh::random_flat_disks(ctx.engine(kFlatCorpus[k]), per_surface, seed + k);
    out.insert(out.end(), d.begin(), d.end());
  }
  return out;
}

VerificationReport named(VerificationReport r, const std::string& name, std::uint64_t seed) {
  r.name = name;
  r.seed = seed;
  return r;
}

VerificationReport error_report(const std::string& name, double err, double tol, std::string witness) {
  SlackTracker tr;
  tr.observe(-err, 0, std::move(witness));
  return tr.report(name, tol);
}

std::vector<VerificationReport> suite_log_psh(SuiteContext& c) {
  const auto seed = c.s.seed;
  const double tol = c.tol(psh::kFiniteDifferenceTol);
  std::size_t n = c.n(100);
  auto grid = psh::default_grid();
  std::vector<VerificationReport> out;

  auto torus_disks = psh::random_torus_disks(n, seed);
  VerificationReport t = psh::verify_log_psh(torus::Foliation(1, 0), torus_disks, grid, tol);
  out.push_back(named(t, "log-psh/torus", seed));
  out.push_back(named(error_report("", t.metrics["max_abs_error_vs_closed_form"], tol, t.witness),
                      "log-psh/torus-fd-vs-closed-form", seed));
  VerificationReport f =
      psh::verify_log_psh(torus::Foliation(1, 0), flat_family(c, std::max<std::size_t>(1, n * 2 / 5), seed + 1), grid, tol);
  out.push_back(named(f, "log-psh/flat", seed));
  out.push_back(named(error_report("", f.metrics["max_abs_error_vs_closed_form"], tol, f.witness),
                      "log-psh/flat-fd-vs-closed-form", seed));

  psh::HoloDisk spot = psh::HoloDisk::torus_affine(torus::Point(0, 1), 1.0, 0.5);
  double v = psh::fd_dbar_d(psh::ScalarField::log_ext(torus::Foliation(1, 0)), spot, 0.0, psh::default_step(spot));
  out.push_back(named(error_report("", std::abs(v - 0.25), tol, "tau0=i F=(1,0) V=1 value=" + format_number(v)),
                      "log-psh/spot-torus", seed));
  psh::HoloDisk fspot = psh::HoloDisk::flat_disk(c.engine("pillowcase_1x1.json"), 0.0, 1.0, 0.5);
  double w = psh::fd_dbar_d(psh::ScalarField::log_ext(torus::Foliation(1, 0)), fspot, 0.0, psh::default_step(fspot));
  out.push_back(named(error_report("", std::abs(w - 1.0), tol, "pillowcase lambda=0 value=" + format_number(w)),
                      "log-psh/spot-flat", seed));
  return out;
}

std::vector<VerificationReport> suite_reciprocal(SuiteContext& c) {
  const auto seed = c.s.seed;
  std::vector<torus::Foliation> fs{torus::Foliation(1, 0), torus::Foliation(0, 1)};
  psh::ReciprocalOptions opts;
  opts.tol = c.tol(psh::kFiniteDifferenceTol);
  std::vector<VerificationReport> out;
  out.push_back(named(psh::verify_reciprocal_psh(fs, {1, 1}, 1, psh::random_torus_disks(c.n(100), seed), opts),
                      "reciprocal/torus", seed));
  out.push_back(named(psh::verify_reciprocal_psh({torus::Foliation(1, 0)}, {1}, 1,
                                                 flat_family(c, std::max<std::size_t>(1, c.n(100) * 2 / 5), seed + 1),
                                                 opts),
                      "reciprocal/flat", seed));
  out.push_back(named(psh::reciprocal_grid_bounds(fs, {1, 1}, 1, -1, 1, 0.5, 2, 50, 50), "reciprocal/bounds-50x50",
                      seed));
  psh::HoloDisk at_i = psh::HoloDisk::torus_affine(torus::Point(0, 1), 0.0, 1.0);
  double rho = psh::evaluate(psh::ScalarField::reciprocal(fs, {1, 1}, 1), at_i, 0.0);
  out.push_back(named(error_report("", std::abs(rho + 1.0 / 3.0), c.tol(psh::kExactTol), "rho(i)=" + format_number(rho)),
                      "reciprocal/value-at-i", seed));
  out.push_back(named(psh::properness_proxy(torus::Point(0, 1), fs[0], fs[1], 512, 0.0), "reciprocal/properness",
                      seed));
  return out;
}

std::vector<VerificationReport> suite_distance(SuiteContext& c) {
  const auto seed = c.s.seed;
  std::vector<VerificationReport> out;
  out.push_back(named(psh::verify_distance_eigen(c.n(1000), seed, c.tol(psh::kClosedFormTol)),
                      "distance/eigen-vs-poincare", seed));
  psh::MeanValueOptions mv;
  mv.tol = c.tol(psh::kFiniteDifferenceTol);
  auto disks = psh::random_torus_disks((c.n(1000) + 2) / 3, seed + 1);
  disks.push_back(psh::HoloDisk::torus_affine(torus::Point(0, 1), 1.0, 0.5));
  out.push_back(named(psh::verify_distance_psh(torus::Point(0, 1), disks, mv), "distance/sub-mean-value", seed));
  double d = torus::teich_distance(torus::Point(0, 1), torus::Point(0, 2));
  out.push_back(named(error_report("", std::abs(d - 0.5 * std::log(2.0)), c.tol(psh::kExactTol),
                                   "d(i,2i)=" + format_number(d)),
                      "distance/i-to-2i", seed));
  return out;
}

std::vector<VerificationReport> suite_kerckhoff_brute(SuiteContext& c) {
  const auto seed = c.s.seed;
  return {named(psh::verify_distance_brute(c.n(1000), seed, torus::kDefaultBruteBound, c.tol(psh::kClosedFormTol)),
                "kerckhoff-brute", seed)};
}

std::vector<VerificationReport> suite_horoball(SuiteContext& c) {
  const auto seed = c.s.seed;
  psh::MaxPrincipleOptions o;
  o.tol = c.tol(psh::kClosedFormTol);
  auto grid = psh::default_grid();
  // interior grid reaching 0.9 r
  for (double r : {0.7, 0.9})
    for (int k = 0; k < 8; ++k) grid.push_back(std::polar(r, 0.785398163397448 * k + 0.1));
  std::vector<VerificationReport> out;
  out.push_back(named(psh::verify_horoball_diskconvex(torus::Foliation(1, 0), 1.0,
                                                      psh::random_torus_disks(c.n(1000), seed), grid, o),
                      "horoball/torus", seed));
  out.push_back(named(psh::verify_horoball_diskconvex(torus::Foliation(1, 0), 1.0,
                                                      flat_family(c, (c.n(1000) + 2) / 3, seed + 1), grid, o),
                      "horoball/flat", seed));
  return out;
}

std::vector<VerificationReport> suite_currents(SuiteContext& c) {
  const auto seed = c.s.seed;
  const double tol = c.tol(psh::kFiniteDifferenceTol);
  auto grid = psh::default_grid();
  std::vector<VerificationReport> out;
  out.push_back(named(psh::verify_currents_inequality(torus::Foliation(1, 0), psh::random_torus_disks(c.n(100), seed),
                                                      grid, tol),
                      "currents/torus", seed));
  out.push_back(named(psh::verify_currents_inequality(torus::Foliation(1, 0),
                                                      flat_family(c, std::max<std::size_t>(1, c.n(100) * 2 / 5), seed + 1),
                                                      grid, tol),
                      "currents/flat", seed));
  return out;
}

std::vector<VerificationReport> suite_strong_positivity(SuiteContext& c) {
  const auto seed = c.s.seed;
  auto grid = psh::default_grid();
  auto flat_disks = flat_family(c, std::max<std::size_t>(1, c.n(100) * 2 / 5), seed + 1);
  std::vector<VerificationReport> out;
  out.push_back(named(psh::verify_strong_positivity_closed_form(c.n(10000), seed, c.tol(psh::kClosedFormTol)),
                      "strong-positivity/torus-closed-form", seed));
  out.push_back(named(psh::verify_strong_positivity_flat(flat_disks, grid, c.tol(psh::kClosedFormTol)),
                      "strong-positivity/flat-closed-form", seed));
  out.push_back(named(psh::verify_strong_positivity_fd(torus::Foliation(1, 0), psh::random_torus_disks(c.n(100), seed),
                                                       grid, c.tol(psh::kFiniteDifferenceTol)),
                      "strong-positivity/torus-fd", seed));
  out.push_back(named(psh::verify_strong_positivity_fd(torus::Foliation(1, 0), flat_disks, grid,
                                                       c.tol(psh::kFiniteDifferenceTol)),
                      "strong-positivity/flat-fd", seed));
  return out;
}

std::vector<VerificationReport> suite_levi(SuiteContext& c) {
  return {named(psh::verify_levi_identity(c.n(10000), c.s.seed, c.tol(psh::kExactTol)), "levi-identity", c.s.seed)};
}

std::vector<VerificationReport> suite_minsky(SuiteContext& c) {
  return {named(psh::verify_minsky(c.n(10000), c.s.seed, c.tol(psh::kExactTol)), "minsky", c.s.seed)};
}

std::vector<VerificationReport> suite_duality(SuiteContext& c) {
  return {named(psh::verify_duality(c.n(1000), c.s.seed, c.tol(psh::kFiniteDifferenceTol)), "duality", c.s.seed)};
}

std::vector<VerificationReport> suite_gardiner(SuiteContext& c) {
  return {named(psh::verify_gardiner(c.n(1000), c.s.seed, c.tol(psh::kFiniteDifferenceTol)), "gardiner", c.s.seed)};
}

std::vector<VerificationReport> suite_periods(SuiteContext& c) {
  std::vector<VerificationReport> out;
  for (const auto& file : kFlatCorpus) {
    flat::FlatSurface s = flat::build(flat::load_gluing(std::filesystem::path(c.s.data_dir) / file));
    auto reps = psh::verify_period_engine(stem(file), s, c.n(100), c.s.seed);
    for (auto& r : reps) {
      if (c.s.tol) {
        r.tolerance = *c.s.tol;
        r.finalize();
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

using SuiteFn = std::function<std::vector<VerificationReport>(SuiteContext&)>;

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> s{
      {"log-psh", suite_log_psh},
      {"reciprocal", suite_reciprocal},
      {"distance", suite_distance},
      {"horoball", suite_horoball},
      {"currents", suite_currents},
      {"minsky", suite_minsky},
      {"duality", suite_duality},
      {"gardiner", suite_gardiner},
      {"levi", suite_levi},
      {"strong-positivity", suite_strong_positivity},
      {"periods", suite_periods},
      {"kerckhoff-brute", suite_kerckhoff_brute},
  };
  return s;
}

// Not part of "all": brute force at the default bound cannot meet the
// closed-form tolerance.
bool in_all(const std::string& name) { return name != "kerckhoff-brute"; }

std::string reports_csv(const json& file) {
  std::ostringstream o;
  o << "suite,name,samples,min_slack,tolerance,pass,seed,witness\n";
  for (const auto& s : file["results"])
    for (const auto& r : s["checks"]) {
      std::string w = r["witness"].get<std::string>();
      std::string quoted = "\"";
      for (char ch : w) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      quoted += "\"";
      o << s["suite"].get<std::string>() << "," << r["name"].get<std::string>() << "," << r["samples"].get<std::size_t>()
        << "," << format_number(r["min_slack"].is_number() ? r["min_slack"].get<double>() : NAN) << ","
        << format_number(r["tolerance"].get<double>()) << "," << (r["pass"].get<bool>() ? "true" : "false") << ","
        << (r["seed"].is_null() ? std::string() : std::to_string(r["seed"].get<std::uint64_t>())) << "," << quoted
        << "\n";
    }
  return o.str();
}

int cmd_verify(const std::string& suite, const std::vector<std::string>& args, const Settings& s, std::ostream& out) {
  std::vector<std::string> selected;
  if (suite == "all") {
    for (const auto& [name, fn] : suites())
      if (in_all(name)) selected.push_back(name);
  } else {
    bool known = false;
    for (const auto& [name, fn] : suites()) known = known || name == suite;
    if (!known) throw UsageError("unknown suite '" + suite + "'");
    selected.push_back(suite);
  }
  if (s.samples && *s.samples == 0) throw UsageError("--samples must be positive");
  if (s.tol && !(*s.tol >= 0.0)) throw UsageError("--tol must be >= 0");

  SuiteContext ctx{s, {}};
  json results = json::array();
  bool all_pass = true;
  for (const auto& name : selected) {
    const SuiteFn* fn = nullptr;
    for (const auto& [n, f] : suites())
      if (n == name) fn = &f;
    json checks = json::array();
    bool pass = true;
    for (const auto& r : (*fn)(ctx)) {
      checks.push_back(report_to_json(r));
      pass = pass && r.pass;
    }
    all_pass = all_pass && pass;
    results.push_back(json{{"suite", name}, {"pass", pass}, {"checks", checks}});
  }
  json file{{"schema", kSchemaVersion},
            {"invocation", invocation_json(args, s)},
            {"results", results},
            {"pass", all_pass}};
  file["invocation"]["command"] = "verify";
  file["invocation"]["suite"] = suite;

  std::string body = s.format == "csv" ? reports_csv(file) : file.dump(2) + "\n";
  if (!s.out_path.empty()) {
    write_file(s.out_path, body);
    out << summarize(file);
  } else if (s.format == "json" || s.format == "csv") {
    out << body;
  } else {
    out << summarize(file);
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

// ---- periods ----

int cmd_periods(const std::string& path, bool require_connected, const Settings& s, std::ostream& out,
                std::ostream& err) {
  flat::FlatSurface surf = flat::build(flat::load_gluing(path));
  flat::DoubleCoverSurface cover = flat::build_double_cover(surf);
  if (require_connected && !cover.connected()) {
    err << "error: double cover of " << path << " is disconnected (orientable differential)\n";
    return kExitDisconnected;
  }
  flat::HomologyBasis basis = flat::odd_symplectic_basis(cover);
  flat::Periods per = flat::periods(cover, basis);
  double ext = flat::ext_bilinear(per, basis);
  double slack = std::abs(ext - surf.area()) / surf.area();
  flat::GenericityResult gen = flat::check_generic(surf);

  json j{{"schema", kSchemaVersion},
         {"file", path},
         {"genus", surf.genus()},
         {"area", surf.area()},
         {"generic", gen.generic},
         {"cover_status", flat::to_string(cover.status)},
         {"cover_genus", cover.genus()},
         {"branch_points", cover.branch_points.size()},
         {"odd_rank", basis.size()},
         {"ext_bilinear", ext},
         {"relative_slack", slack},
         {"pass", slack <= psh::kClosedFormTol}};
  json cones = json::array(), wit = json::array(), ps = json::array();
  for (const auto& c : surf.cone_points()) cones.push_back(c.multiple);
  for (int w : gen.witnesses) wit.push_back(surf.cone_points()[w].multiple);
  for (cplx z : per.values) ps.push_back(json::array({z.real(), z.imag()}));
  j["cone_angles_over_pi"] = cones;
  j["non_generic_cone_angles_over_pi"] = wit;
  j["periods"] = ps;

  std::string body;
  if (s.format == "json") {
    body = j.dump(2) + "\n";
  } else {
    std::ostringstream o;
    o << "file: " << path << "\n"
      << "genus: " << surf.genus() << "\n"
      << "area: " << format_number(surf.area()) << "\n"
      << "cone angles / pi:";
    for (const auto& c : surf.cone_points()) o << " " << c.multiple;
    o << "\ngeneric: " << (gen.generic ? "yes" : "no");
    if (!gen.generic) {
      o << " (witness angles / pi:";
      for (int w : gen.witnesses) o << " " << surf.cone_points()[w].multiple;
      o << ")";
    }
    o << "\ncover: " << flat::to_string(cover.status) << ", genus " << cover.genus() << ", "
      << cover.branch_points.size() << " branch points\n"
      << "odd rank: " << basis.size() << "\n";
    for (std::size_t k = 0; k < per.values.size(); ++k)
      o << (k % 2 == 0 ? "alpha" : "beta") << "_" << k / 2 + 1 << ": " << format_complex(per.values[k]) << "\n";
    o << "ext_bilinear: " << format_number(ext) << "\n"
      << "slack: " << format_number(slack) << "\n";
    body = o.str();
  }
  if (!s.out_path.empty())
    write_file(s.out_path, body);
  else
    out << body;
  return slack <= psh::kClosedFormTol ? kExitOk : kExitCheckFailed;
}

// ---- grid ----

int cmd_grid(const std::string& field, const std::string& fol, const std::string& fol2, double c,
             const std::string& ref, const std::string& region, std::size_t res, const Settings& s, std::ostream& out) {
  auto r = parse_list(region, 4, "region");
  if (res == 0) throw UsageError("--res must be positive");
  if (!(r[2] > torus::kMinImaginaryPart) || !(r[3] > torus::kMinImaginaryPart))
    throw UsageError("grid region must lie in Im tau > 0");
  std::function<double(const torus::Point&)> f;
  torus::Foliation F = parse_foliation(fol), G = parse_foliation(fol2);
  torus::Point x0(parse_complex(ref));
  if (field == "ext") {
    f = [F](const torus::Point& x) { return torus::extremal_length(x, F); };
  } else if (field == "logext") {
    f = [F](const torus::Point& x) { return std::log(torus::extremal_length(x, F)); };
  } else if (field == "rho") {
    if (!(c >= 0.0)) throw UsageError("--c must be >= 0");
    f = [F, G, c](const torus::Point& x) {
      return -1.0 / (c + torus::extremal_length(x, F) + torus::extremal_length(x, G));
    };
  } else if (field == "dist") {
    f = [x0](const torus::Point& x) { return torus::teich_distance(x0, x); };
  } else {
    throw UsageError("unknown field '" + field + "' (ext, logext, rho, dist)");
  }

  std::ostringstream o;
  json pts = json::array();
  if (s.format != "json") o << "re,im,value\n";
  for (std::size_t j = 0; j < res; ++j)
    for (std::size_t i = 0; i < res; ++i) {
      double x = res == 1 ? r[0] : r[0] + (r[1] - r[0]) * static_cast<double>(i) / static_cast<double>(res - 1);
      double y = res == 1 ? r[2] : r[2] + (r[3] - r[2]) * static_cast<double>(j) / static_cast<double>(res - 1);
      double v = f(torus::Point(x, y));
      if (s.format == "json")
        pts.push_back(json::array({x, y, v}));
      else
        o << format_number(x) << "," << format_number(y) << "," << format_number(v) << "\n";
    }
  std::string body = o.str();
  if (s.format == "json")
    body = json{{"schema", kSchemaVersion}, {"field", field}, {"resolution", res}, {"points", pts}}.dump(2) + "\n";
  if (!s.out_path.empty())
    write_file(s.out_path, body);
  else
    out << body;
  return kExitOk;
}

void print_value(std::ostream& out, const Settings& s, const std::string& cmd, const json& value,
                 const std::string& text) {
  std::string body;
  if (s.format == "json")
    body = json{{"command", cmd}, {"value", value}}.dump() + "\n";
  else if (s.format == "csv")
    body = "value\n" + text + "\n";
  else
    body = text + "\n";
  if (!s.out_path.empty())
    write_file(s.out_path, body);
  else
    out << body;
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

cplx parse_complex(const std::string& s) {
  auto v = parse_list(s, 2, "complex number");
  return {v[0], v[1]};
}

torus::Foliation parse_foliation(const std::string& s) {
  auto v = parse_list(s, 2, "foliation");
  return torus::Foliation(v[0], v[1]);
}

std::filesystem::path default_data_dir() { return TEICH_DATA_DIR; }

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : suites()) n.push_back(name);
    return n;
  }();
  return names;
}

nlohmann::json report_to_json(const VerificationReport& r) {
  json j{{"name", r.name},         {"samples", r.samples}, {"min_slack", r.min_slack}, {"tolerance", r.tolerance},
         {"witness", r.witness},   {"pass", r.pass},       {"metrics", r.metrics}};
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  return j;
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.name = j.at("name").get<std::string>();
  r.samples = j.at("samples").get<std::size_t>();
  r.min_slack = j.at("min_slack").is_null() ? std::nan("") : j.at("min_slack").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.witness = j.at("witness").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
  r.metrics = j.at("metrics").get<std::map<std::string, double>>();
  return r;
}

std::string summarize(const nlohmann::json& file) {
  std::ostringstream o;
  for (const auto& s : file.at("results"))
    for (const auto& c : s.at("checks")) {
      VerificationReport r = report_from_json(c);
      o << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  samples=" << r.samples
        << "  min_slack=" << format_number(r.min_slack) << "  tol=" << format_number(r.tolerance) << "\n";
    }
  o << "overall: " << (file.at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
  return o.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extremal length and Teichmüller geometry checks", "teich"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  std::string seed_text;
  app.add_option("--out", s.out_path, "Write output to PATH");
  app.add_option("--format", s.format, "text|json|csv")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--seed", s.seed, "RNG seed (default 0)");
  app.add_option("--tol", s.tol, "Tolerance override");
  app.add_option("--samples", s.samples, "Sample count override");
  app.add_option("--data", s.data_dir, "Directory with gluing files");

  std::string tau = "0,1", fol = "1,0", v = "1,0", tau0 = "0,1", from, to, method = "eigen";
  long bound = torus::kDefaultBruteBound;

  auto* ext = app.add_subcommand("ext", "Extremal length");
  ext->add_option("--tau", tau)->required();
  ext->add_option("--fol", fol)->required();

  auto* levi = app.add_subcommand("levi", "Levi form of Ext along tau + lambda V");
  levi->add_option("--tau", tau)->required();
  levi->add_option("--fol", fol)->required();
  levi->add_option("--v", v)->required();

  auto* eta = app.add_subcommand("eta", "Coefficient of eta_v");
  eta->add_option("--tau", tau)->required();
  eta->add_option("--fol", fol)->required();
  eta->add_option("--v", v)->required();

  auto* jmap = app.add_subcommand("jmap", "Coefficient of J_{tau0}(tau)");
  jmap->add_option("--tau0", tau0)->required();
  jmap->add_option("--fol", fol)->required();
  jmap->add_option("--tau", tau)->required();

  auto* dist = app.add_subcommand("dist", "Teichmüller distance");
  dist->add_option("--from", from)->required();
  dist->add_option("--to", to)->required();
  dist->add_option("--method", method)->check(CLI::IsMember({"eigen", "brute"}));
  dist->add_option("--bound", bound, "Brute-force bound B");

  std::string path;
  bool require_connected = false;
  auto* per = app.add_subcommand("periods", "Periods and bilinear extremal length of a gluing file");
  per->add_option("path", path)->required();
  per->add_flag("--require-connected", require_connected);

  std::string suite;
  auto* ver = app.add_subcommand("verify", "Run verification suites");
  ver->add_option("suite", suite)->required();

  std::string field = "logext", fol2 = "0,1", ref = "0,1", region = "-1,1,0.5,2";
  double c = 1.0;
  std::size_t res = 50;
  auto* grid = app.add_subcommand("grid", "Sample a field over a rectangle in the upper half-plane");
  grid->add_option("--field", field, "ext|logext|rho|dist");
  grid->add_option("--fol", fol);
  grid->add_option("--fol2", fol2, "Second foliation for rho");
  grid->add_option("--c", c, "Constant for rho");
  grid->add_option("--tau0", ref, "Base point for dist");
  grid->add_option("--region", region, "xmin,xmax,ymin,ymax");
  grid->add_option("--res", res, "Points per axis");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (ext->parsed()) {
      double val = torus::extremal_length(torus::Point(parse_complex(tau)), parse_foliation(fol));
      print_value(out, s, "ext", val, format_number(val));
    } else if (levi->parsed() || eta->parsed()) {
      torus::Point x(parse_complex(tau));
      torus::Tangent t{x, parse_complex(v)};
      if (levi->parsed()) {
        double val = torus::levi_form(x, parse_foliation(fol), t);
        print_value(out, s, "levi", val, format_number(val));
      } else {
        cplx val = torus::eta_v(x, parse_foliation(fol), t).coeff;
        print_value(out, s, "eta", json::array({val.real(), val.imag()}), format_complex(val));
      }
    } else if (jmap->parsed()) {
      cplx val = torus::j_map(torus::Point(parse_complex(tau0)), parse_foliation(fol), torus::Point(parse_complex(tau)))
                     .coeff;
      print_value(out, s, "jmap", json::array({val.real(), val.imag()}), format_complex(val));
    } else if (dist->parsed()) {
      auto m = method == "brute" ? torus::DistanceMethod::brute : torus::DistanceMethod::eigen;
      auto r = torus::teich_distance(torus::Point(parse_complex(from)), torus::Point(parse_complex(to)), m, bound);
      print_value(out, s, "dist", r.distance, format_number(r.distance));
    } else if (per->parsed()) {
      return cmd_periods(path, require_connected, s, out, err);
    } else if (ver->parsed()) {
      return cmd_verify(suite, args, s, out);
    } else if (grid->parsed()) {
      return cmd_grid(field, fol, fol2, c, ref, region, res, s, out);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace teich::cli
