#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>

namespace loopfact::cli {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// [0, 1) from the top 53 bits; std::uniform_real_distribution is not portable
double uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

Complex random_coefficient(std::mt19937_64& gen, double bound) {
  const double r = bound * uniform(gen);
  const double phase = 2.0 * std::numbers::pi * uniform(gen);
  return std::polar(r, phase);
}

double list_error(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    const Complex x = i < a.size() ? a[i] : Complex{};
    const Complex y = i < b.size() ? b[i] : Complex{};
    e = std::max(e, std::abs(x - y));
  }
  return e;
}

double eta_zeta_error(const RootSubgroupCoordinates& a, const RootSubgroupCoordinates& b) {
  return std::max(list_error(a.eta, b.eta), list_error(a.zeta, b.zeta));
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

double percentile(const std::vector<double>& sorted, double p) {
  const auto n = static_cast<double>(sorted.size());
  const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(p / 100.0 * n)));
  return sorted[rank - 1];
}

std::string source_tag(const std::string& check) {
  if (check.starts_with("lemma_") || check.starts_with("shape_")) return "exact product expansion vs multi-index sum";
  if (check.starts_with("theorem_")) return "exact Taylor quotient vs chain sum";
  if (check == "leading_term") return "chain sum with the top variable shifted";
  if (check == "cancellation_words") return "word expansion of gamma (1 - delta + delta^2 - ...)";
  if (check == "cancellation_value") return "surviving words vs chain sum";
  if (check.starts_with("display_")) return "closed-form low-order coefficients";
  return "oracle";
}

void write_output(const RunConfig& config, const std::string& name, const Json& j) {
  std::filesystem::create_directories(config.out_dir);
  write_json_file((std::filesystem::path(config.out_dir) / name).string(), j);
}

void require_float(const RunConfig& config) {
  if (config.mode != "float") throw InvalidInput("exact mode is only available for verify");
}

Json error_json(const std::string& kind, const std::string& message) {
  return Json{{"error", kind}, {"message", message}};
}

// forward

int cmd_forward(const RunConfig& config, const std::string& input, std::ostream& out) {
  require_float(config);
  RootSubgroupCoordinates coords;
  if (input.empty()) {
    coords = sample_coordinates(config.seed, config.degree, config.rho, config.chi_law);
    write_output(config, "sampled.json", coords_to_json(coords));
  } else {
    coords = coords_from_json(read_json_file(input));
  }
  const MatrixLoop<Complex> g = assemble_loop(coords);
  const TriangularFactorization t = assemble_triangular(coords);

  const double defect = ml_unitary_defect(g, std::max(config.grid_size(), 4 * coords.degree() + 4));
  const auto det = ml_det(g) - LaurentSeries<Complex>::constant(Complex(1.0));
  double det_residual = 0.0;
  for (int n = det.lo(); n <= det.hi(); ++n) det_residual = std::max(det_residual, std::abs(det.coeff(n)));
  const double recomposition = max_abs_diff(recompose(t, g.window()), g, g.window());

  write_output(config, "loop.json", loop_to_json(g));
  write_output(config, "triangular.json", triangular_to_json(t));
  write_output(config, "diagnostics.json",
               Json{{"unitary_defect", defect},
                    {"det_residual", det_residual},
                    {"recomposition_residual", recomposition},
                    {"tol", config.tol},
                    {"unitary", defect <= config.tol}});
  out << "forward: degree " << coords.degree() << ", window [" << g.window().lo << ", " << g.window().hi
      << "], unitary defect " << defect << "\n";
  return kOk;
}

// factor

int cmd_factor(const RunConfig& config, const std::string& input, std::ostream& out) {
  require_float(config);
  const MatrixLoop<Complex> g = loop_from_json<Complex>(read_json_file(input));
  const BirkhoffFactorization b = birkhoff_factor(g, config.section_size());
  const TriangularFactorization t = triangular_from_birkhoff(b);
  write_output(config, "birkhoff.json", birkhoff_to_json(b));
  write_output(config, "triangular.json", triangular_to_json(t));
  out << "factor: condition estimate " << b.condition_estimate.value_or(0.0) << ", positive residual "
      << b.positive_residual << "\n";
  return kOk;
}

// solve

int cmd_solve(const RunConfig& config, const std::string& input, std::ostream& out) {
  require_float(config);
  const Json j = read_json_file(input);
  if (config.zeta_only) {
    // a birkhoff.json is read for its g_plus block only
    MatrixLoop<Complex> g_plus;
    if (j.is_object() && j.contains("g_plus")) {
      g_plus = loop_from_json<Complex>(j.at("g_plus"));
    } else {
      g_plus = birkhoff_factor(loop_from_json<Complex>(j), config.section_size()).g_plus;
    }
    Json z = Json::array();
    for (const Complex& c : solve_zeta_from_plus(g_plus, config.degree)) z.push_back(scalar_to_json(c));
    write_output(config, "coords.json", Json{{"eta", nullptr}, {"zeta", z}, {"chi", nullptr}});
    out << "solve: zeta_1..zeta_" << config.degree << " from g_plus\n";
    return kOk;
  }
  const SolveResult r = solve_all(loop_from_json<Complex>(j), config.solve_options());
  write_output(config, "coords.json", solve_to_json(r));
  out << "solve: degree " << config.degree << (r.chi_available ? "" : ", chi omitted (not unitary)") << "\n";
  return kOk;
}

// roundtrip

int cmd_roundtrip(const RunConfig& config, std::ostream& out) {
  require_float(config);
  const Json report = roundtrip_report(config);
  write_output(config, "report.json", report);
  const Json& s = report.at("summary");
  out << "roundtrip: " << s.at("trials") << " trials, " << s.at("failures") << " failures, max error "
      << s.at("max_error").dump() << (s.at("pass").get<bool>() ? " (pass)" : " (FAIL)") << "\n";
  return kOk;
}

// verify

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::vector<ExactPoint> points =
      config.fixtures.empty() ? stock_points() : points_from_json(read_json_file(config.fixtures));
  const Json report = verify_report(config, points);
  write_output(config, "report.json", report);
  if (report.contains("warning")) err << "warning: " << report.at("warning").get<std::string>() << "\n";
  const bool ok = report.at("ok").get<bool>();
  out << "verify: " << points.size() << " points, " << report.at("checks").size() << " checks, "
      << (ok ? "all passed" : "MISMATCH") << "\n";
  if (!ok) {
    for (const Json& c : report.at("checks")) {
      if (c.at("ok").get<bool>()) continue;
      err << "mismatch: " << c.at("point").get<std::string>() << " " << c.at("check").get<std::string>()
          << " at n = " << c.at("n") << ": " << c.at("lhs").get<std::string>()
          << " != " << c.at("rhs").get<std::string>() << "\n";
      break;
    }
    return kOracleMismatch;
  }
  return kOk;
}

}  // namespace

SolveOptions RunConfig::solve_options() const {
  SolveOptions o;
  o.degree = degree;
  o.section_size = section_size();
  o.grid = grid_size();
  o.tol = tol;
  o.unitary_tol = unitary_tol;
  return o;
}

void RunConfig::validate() const {
  if (degree < 1) throw InvalidInput("degree must be positive");
  if (section_size() < degree) throw InvalidInput("toeplitz size must be at least the degree");
  if (grid_size() < 4 * degree) throw InvalidInput("grid size must be at least 4 * degree");
  if (!(tol > 0.0) || !(unitary_tol > 0.0)) throw InvalidInput("tolerances must be positive");
  if (trials < 0) throw InvalidInput("trials must be nonnegative");
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidInput("rho must lie in [0, 1)");
  if (mode != "float" && mode != "exact") throw InvalidInput("mode must be float or exact");
  if (chi_law != "log" && chi_law != "geometric") throw InvalidInput("chi law must be log or geometric");
}

Json RunConfig::to_json() const {
  return Json{{"degree", degree},     {"toeplitz_size", section_size()}, {"grid", grid_size()},
              {"tol", tol},           {"unitary_tol", unitary_tol},     {"mode", mode},
              {"seed", seed},         {"trials", trials},               {"rho", rho},
              {"chi_law", chi_law}};
}

std::uint64_t trial_seed(std::uint64_t seed, int index) {
  return mix(mix(seed) ^ static_cast<std::uint64_t>(index));
}

RootSubgroupCoordinates sample_coordinates(std::uint64_t seed, int degree, double rho, const std::string& chi_law) {
  const bool log_law = chi_law == "log";
  std::mt19937_64 gen(seed);
  RootSubgroupCoordinates c;
  for (int n = 0; n <= degree; ++n) c.eta.push_back(random_coefficient(gen, std::pow(rho, n + 1)));
  for (int n = 1; n <= degree; ++n) c.zeta.push_back(random_coefficient(gen, std::pow(rho, n)));
  for (int n = 1; n <= degree; ++n) {
    c.chi_plus.push_back(random_coefficient(gen, std::pow(rho, n) / (log_law ? n : 1)));
  }
  c.chi0_im = rho * std::numbers::pi * (2.0 * uniform(gen) - 1.0);
  return c;
}

double coordinate_error(const RootSubgroupCoordinates& want, const RootSubgroupCoordinates& got) {
  const double phase = std::abs(std::remainder(want.chi0_im - got.chi0_im, 2.0 * std::numbers::pi));
  return std::max({eta_zeta_error(want, got), list_error(want.chi_plus, got.chi_plus), phase});
}

Json solve_to_json(const SolveResult& r) {
  const SolveDiagnostics& d = r.diagnostics;
  Json j = coords_to_json(r.coords);
  if (!r.chi_available) {
    j.erase("chi0_im");
    j.erase("chi_plus");
    j["chi"] = nullptr;
  }
  j["unitary"] = d.unitary;
  j["diagnostics"] = Json{{"residuals",
                           {{"positive", d.positive_residual},
                            {"birkhoff", d.birkhoff_residual},
                            {"chi_discrepancy", optional_number(d.chi_discrepancy)},
                            {"chi_raw_discrepancy", optional_number(d.chi_raw_discrepancy)},
                            {"chi_tail", optional_number(d.chi_tail)}}},
                          {"unitary", d.unitary},
                          {"condition_estimate", d.condition_estimate}};
  return j;
}

Json roundtrip_report(const RunConfig& config) {
  using Clock = std::chrono::steady_clock;
  const SolveOptions options = config.solve_options();
  SolveOptions doubled = options;
  doubled.section_size = 2 * options.section_size;

  Json trials = Json::array();
  std::vector<double> errors;
  std::vector<double> times;
  int failures = 0;
  double m_change = 0.0;
  for (int i = 0; i < config.trials; ++i) {
    const std::uint64_t child = trial_seed(config.seed, i);
    Json trial{{"index", i}, {"seed", child}};
    try {
      const auto start = Clock::now();
      const RootSubgroupCoordinates coords = sample_coordinates(child, config.degree, config.rho, config.chi_law);
      const MatrixLoop<Complex> g = assemble_loop(coords);
      const SolveResult r = solve_all(g, options);
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

      const SolveResult r2 = solve_all(g, doubled);
      const double change = r.chi_available && r2.chi_available ? coordinate_error(r.coords, r2.coords)
                                                                : eta_zeta_error(r.coords, r2.coords);
      m_change = std::max(m_change, change);

      trial["eta_zeta_error"] = eta_zeta_error(coords, r.coords);
      trial["error"] = r.chi_available ? Json(coordinate_error(coords, r.coords)) : Json(nullptr);
      trial["condition_estimate"] = r.diagnostics.condition_estimate;
      trial["birkhoff_residual"] = r.diagnostics.birkhoff_residual;
      trial["chi_discrepancy"] = optional_number(r.diagnostics.chi_discrepancy);
      trial["m_doubling_change"] = change;
      if (config.timings) trial["time_ms"] = ms;
      if (r.chi_available) {
        trial["status"] = "ok";
        errors.push_back(trial["error"].get<double>());
        times.push_back(ms);
      } else {
        trial["status"] = "chi_unavailable";
        ++failures;
      }
    } catch (const Error& e) {
      trial["status"] = "error";
      trial["message"] = e.what();
      ++failures;
    }
    trials.push_back(trial);
  }

  std::sort(errors.begin(), errors.end());
  Json pct = nullptr;
  if (!errors.empty()) {
    pct = Json{{"p50", percentile(errors, 50)},
               {"p90", percentile(errors, 90)},
               {"p99", percentile(errors, 99)},
               {"p100", errors.back()}};
  }
  Json summary{{"trials", config.trials},
               {"failures", failures},
               {"max_error", errors.empty() ? Json(nullptr) : Json(errors.back())},
               {"percentiles", pct},
               {"max_m_doubling_change", m_change},
               {"pass", failures == 0 && (errors.empty() || errors.back() <= config.tol)}};
  if (config.timings && !times.empty()) {
    std::sort(times.begin(), times.end());
    summary["median_time_ms"] = percentile(times, 50);
  }
  return Json{{"version", LOOPFACT_VERSION},
              {"command", "roundtrip"},
              {"config", config.to_json()},
              {"sources",
               {{"coordinates", "seeded sampler (mt19937_64, child seed per trial)"},
                {"forward", "assemble_loop"},
                {"inverse", "solve_all"},
                {"error", "max abs coordinate difference"},
                {"m_doubling_change", "solve_all at 2M vs M"}}},
              {"trials", trials},
              {"summary", summary}};
}

Json verify_report(const RunConfig& config, const std::vector<ExactPoint>& points) {
  Json checks = Json::array();
  Json per_point = Json::array();
  bool ok = true;
  for (const ExactPoint& p : points) {
    const OracleReport r = verify_point(p);
    ok = ok && r.ok();
    Json entry{{"name", p.name}, {"side", p.side == Side::k1 ? "k1" : "k2"}, {"ok", r.ok()}};
    entry["first_mismatch"] = r.first_mismatch() ? Json(*r.first_mismatch()) : Json(nullptr);
    per_point.push_back(entry);
    for (const OracleCheck& c : r.checks) {
      checks.push_back(Json{{"point", p.name},
                            {"check", c.name},
                            {"n", c.n},
                            {"ok", c.ok},
                            {"lhs", c.lhs},
                            {"rhs", c.rhs},
                            {"source", source_tag(c.name)}});
    }
  }
  Json report{{"version", LOOPFACT_VERSION},
              {"command", "verify"},
              {"config", config.to_json()},
              {"ok", ok},
              {"points", per_point},
              {"checks", checks}};
  if (points.empty()) report["warning"] = "empty fixture set; nothing to verify";
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string input;

  CLI::App app{"Root-subgroup coordinates and triangular factorization of SU(2) loops", "loopfact"};
  app.set_version_flag("--version", std::string(LOOPFACT_VERSION));
  app.set_config("--config", "", "TOML file with any of the options below; flags override it");
  app.add_option("--degree", config.degree, "truncation degree N");
  app.add_option("--toeplitz-size", config.toeplitz_size, "finite section size M (default 2N+8)");
  app.add_option("--grid", config.grid, "circle grid size (default 8N)");
  app.add_option("--tol", config.tol, "coordinate tolerance");
  app.add_option("--unitary-tol", config.unitary_tol, "threshold on the two Re(chi_+) formulas");
  app.add_option("--mode", config.mode, "float | exact")->check(CLI::IsMember({"float", "exact"}));
  app.add_option("--seed", config.seed);
  app.add_option("--trials", config.trials);
  app.add_option("--rho", config.rho, "coefficient decay for sampled coordinates");
  app.add_option("--chi-law", config.chi_law, "log: |chi_n| <= rho^n/n, geometric: |chi_n| <= rho^n")
      ->check(CLI::IsMember({"log", "geometric"}));
  app.add_option("--out-dir", config.out_dir, "directory for the JSON outputs");
  app.add_flag("--timings", config.timings, "record per-trial wall times (reports stop being reproducible)");
  app.fallthrough();
  app.require_subcommand(1);

  auto* forward = app.add_subcommand("forward", "coords.json -> loop.json, triangular.json");
  forward->add_option("coords", input, "coordinates file (default: sample from --seed into sampled.json)");
  auto* factor = app.add_subcommand("factor", "loop.json -> birkhoff.json, triangular.json");
  factor->add_option("loop", input)->required();
  auto* solve = app.add_subcommand("solve", "loop.json -> coords.json");
  solve->add_option("loop", input, "loop.json, or birkhoff.json with --zeta-only")->required();
  solve->add_flag("--zeta-only", config.zeta_only, "recover zeta from the g_plus block only");
  auto* roundtrip = app.add_subcommand("roundtrip", "seeded forward/solve trials -> report.json");
  auto* verify = app.add_subcommand("verify", "exact oracle checks -> report.json");
  verify->add_option("--fixtures", config.fixtures, "points file (default: built-in points)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    config.validate();
    if (forward->parsed()) return cmd_forward(config, input, out);
    if (factor->parsed()) return cmd_factor(config, input, out);
    if (solve->parsed()) return cmd_solve(config, input, out);
    if (roundtrip->parsed()) return cmd_roundtrip(config, out);
    if (verify->parsed()) return cmd_verify(config, out, err);
    return kBadInput;
  } catch (const NotTopStratum& e) {
    Json j = error_json("NotTopStratum", e.what());
    j["condition_estimate"] = std::isfinite(e.condition()) ? Json(e.condition()) : Json(nullptr);
    err << j.dump() << "\n";
    return kNotTopStratum;
  } catch (const NoTriangularFactorization& e) {
    err << error_json("NoTriangularFactorization", e.what()).dump() << "\n";
    return kNoTriangular;
  } catch (const MismatchAt& e) {
    err << error_json("MismatchAt", e.what()).dump() << "\n";
    return kOracleMismatch;
  } catch (const InvalidInput& e) {
    err << error_json("InvalidInput", e.what()).dump() << "\n";
    return kBadInput;
  } catch (const GridTooSmall& e) {
    err << error_json("GridTooSmall", e.what()).dump() << "\n";
    return kBadInput;
  } catch (const Error& e) {
    err << error_json("Error", e.what()).dump() << "\n";
    return kFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << error_json("InvalidInput", e.what()).dump() << "\n";
    return kBadInput;
  }
}

}  // namespace loopfact::cli
