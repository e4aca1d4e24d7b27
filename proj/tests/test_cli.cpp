#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace loopfact;
using L = MatrixLoop<Complex>;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "loopfact_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json read(const fs::path& p) { return read_json_file(p.string()); }

void write(const fs::path& p, const Json& j) { write_json_file(p.string(), j); }

}  // namespace

TEST_CASE("forward") {
  SUBCASE("zero coordinates give the identity loop") {
    const fs::path dir = scratch("forward_zero");
    write(dir / "in.json", Json::parse(R"({"eta": [[0,0]], "zeta": [[0,0],[0,0]], "chi0_im": 0, "chi_plus": []})"));
    const Run r = run({"--out-dir", dir.string(), "forward", (dir / "in.json").string()});
    REQUIRE(r.code == cli::kOk);
    CHECK(max_abs_diff(loop_from_json<Complex>(read(dir / "loop.json")), L::identity()) == 0.0);
    const Json d = read(dir / "diagnostics.json");
    CHECK(d.at("unitary_defect").get<double>() == 0.0);
    CHECK(d.at("unitary").get<bool>());
  }
  SUBCASE("single zeta_1 matches the golden files") {
    const fs::path dir = scratch("forward_single");
    const Run r = run({"--out-dir", dir.string(), "forward", support::fixture("single_zeta/coords.json")});
    REQUIRE(r.code == cli::kOk);
    const auto g = loop_from_json<Complex>(read(dir / "loop.json"));
    CHECK(max_abs_diff(g, loop_from_json<Complex>(read(support::fixture("single_zeta/loop.json")))) < 1e-12);
    const auto t = triangular_from_json(read(dir / "triangular.json"));
    const auto want = triangular_from_json(read(support::fixture("single_zeta/triangular.json")));
    CHECK(max_abs_diff(t.l, want.l) < 1e-12);
    CHECK(max_abs_diff(t.u, want.u) < 1e-12);
    CHECK(std::abs(t.a0 - want.a0) < 1e-12);
    CHECK(std::abs(t.m0 - want.m0) < 1e-12);
  }
  SUBCASE("sampled from a seed") {
    const fs::path dir = scratch("forward_seed");
    const Run r = run({"--out-dir", dir.string(), "--seed", "42", "--degree", "8", "forward"});
    REQUIRE(r.code == cli::kOk);
    const Json d = read(dir / "diagnostics.json");
    CHECK(d.at("unitary_defect").get<double>() <= 1e-8);
    CHECK(d.at("det_residual").get<double>() <= 1e-8);
    CHECK(d.at("unitary").get<bool>());
    const auto c = coords_from_json(read(dir / "sampled.json"));
    CHECK(cli::coordinate_error(c, cli::sample_coordinates(42, 8, 0.6)) == 0.0);
  }
}

TEST_CASE("factor") {
  SUBCASE("identity") {
    const fs::path dir = scratch("factor_identity");
    write(dir / "loop.json", loop_to_json(L::identity()));
    REQUIRE(run({"--out-dir", dir.string(), "factor", (dir / "loop.json").string()}).code == cli::kOk);
    const auto b = birkhoff_from_json(read(dir / "birkhoff.json"));
    CHECK(max_abs_diff(b.g_minus, L::identity()) < 1e-15);
    CHECK(max_abs_diff(b.g_plus, L::identity()) < 1e-15);
  }
  SUBCASE("single k2 loop gives the golden triple") {
    const fs::path dir = scratch("factor_single");
    const Run r = run({"--out-dir", dir.string(), "--degree", "1", "factor", support::fixture("single_zeta/loop.json")});
    REQUIRE(r.code == cli::kOk);
    const auto b = birkhoff_from_json(read(dir / "birkhoff.json"));
    const auto want = birkhoff_from_json(read(support::fixture("single_zeta/birkhoff.json")));
    CHECK(max_abs_diff(b.g_minus, want.g_minus) < 1e-12);
    CHECK(max_abs_diff(b.g_plus, want.g_plus) < 1e-12);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) CHECK(std::abs(b.g_zero[i][j] - want.g_zero[i][j]) < 1e-12);
    }
  }
  SUBCASE("g0 = [[0,1],[-1,0]] exits 4") {
    const fs::path dir = scratch("factor_swap");
    write(dir / "loop.json", loop_to_json(L::constant({{{0.0, 1.0}, {-1.0, 0.0}}})));
    const Run r = run({"--out-dir", dir.string(), "factor", (dir / "loop.json").string()});
    CHECK(r.code == cli::kNoTriangular);
    CHECK(Json::parse(r.err).at("error") == "NoTriangularFactorization");
  }
  SUBCASE("lower stratum exits 3 with the condition estimate") {
    const fs::path dir = scratch("factor_stratum");
    using S = LaurentSeries<Complex>;
    write(dir / "loop.json", loop_to_json(L::diagonal(S(1, {1.0}), S(-1, {1.0}))));
    const Run r = run({"--out-dir", dir.string(), "factor", (dir / "loop.json").string()});
    CHECK(r.code == cli::kNotTopStratum);
    const Json e = Json::parse(r.err);
    CHECK(e.at("error") == "NotTopStratum");
    CHECK(e.contains("condition_estimate"));
  }
}

TEST_CASE("solve") {
  SUBCASE("identity gives zero coordinates") {
    const fs::path dir = scratch("solve_identity");
    write(dir / "loop.json", loop_to_json(L::identity()));
    REQUIRE(run({"--out-dir", dir.string(), "--degree", "3", "solve", (dir / "loop.json").string()}).code == cli::kOk);
    const Json j = read(dir / "coords.json");
    CHECK(j.at("unitary").get<bool>());
    const auto c = coords_from_json(j);
    RootSubgroupCoordinates zero;
    zero.eta.assign(4, 0.0);
    zero.zeta.assign(3, 0.0);
    zero.chi_plus.assign(3, 0.0);
    CHECK(cli::coordinate_error(zero, c) < 1e-14);
  }
  SUBCASE("forward with seed 42 then solve recovers the coordinates") {
    const fs::path dir = scratch("solve_seed");
    REQUIRE(run({"--out-dir", dir.string(), "--seed", "42", "forward"}).code == cli::kOk);
    REQUIRE(run({"--out-dir", dir.string(), "solve", (dir / "loop.json").string()}).code == cli::kOk);
    const Json j = read(dir / "coords.json");
    CHECK(cli::coordinate_error(coords_from_json(read(dir / "sampled.json")), coords_from_json(j)) <= 1e-8);
    const Json& d = j.at("diagnostics");
    CHECK(d.at("unitary").get<bool>());
    CHECK(d.at("condition_estimate").get<double>() > 0.0);
    CHECK(d.at("residuals").at("birkhoff").get<double>() <= 1e-9);
    CHECK(d.at("residuals").at("chi_discrepancy").get<double>() <= 1e-8);
  }
  SUBCASE("non-unitary loop: chi null, unitary false") {
    const fs::path dir = scratch("solve_nonunitary");
    Json g = loop_to_json(assemble_loop(cli::sample_coordinates(7, 8, 0.6)));
    Json& c = g.at("entries")[1][0].at("coeffs");
    const int k = 1 - g.at("entries")[1][0].at("lo").get<int>();
    c[k][0] = c[k][0].get<double>() * 1.1;
    c[k][1] = c[k][1].get<double>() * 1.1;
    write(dir / "loop.json", g);
    REQUIRE(run({"--out-dir", dir.string(), "solve", (dir / "loop.json").string()}).code == cli::kOk);
    const Json j = read(dir / "coords.json");
    CHECK(j.at("chi").is_null());
    CHECK_FALSE(j.at("unitary").get<bool>());
    CHECK(j.at("eta").size() == 9);
    CHECK(j.at("zeta").size() == 8);
    CHECK_FALSE(j.contains("chi_plus"));
  }
  SUBCASE("--zeta-only reads g_plus from birkhoff.json") {
    const fs::path dir = scratch("solve_zeta_only");
    REQUIRE(run({"--out-dir", dir.string(), "--seed", "5", "forward"}).code == cli::kOk);
    REQUIRE(run({"--out-dir", dir.string(), "factor", (dir / "loop.json").string()}).code == cli::kOk);
    REQUIRE(run({"--out-dir", dir.string(), "solve", "--zeta-only", (dir / "birkhoff.json").string()}).code == cli::kOk);
    const Json j = read(dir / "coords.json");
    CHECK(j.at("eta").is_null());
    CHECK(j.at("chi").is_null());
    const auto want = coords_from_json(read(dir / "sampled.json"));
    const auto got = coords_from_json(j);
    REQUIRE(got.zeta.size() == want.zeta.size());
    for (std::size_t k = 0; k < got.zeta.size(); ++k) CHECK(std::abs(got.zeta[k] - want.zeta[k]) <= 1e-8);
  }
}

TEST_CASE("roundtrip") {
  SUBCASE("zero decay gives error 0") {
    const fs::path dir = scratch("roundtrip_zero");
    REQUIRE(run({"--out-dir", dir.string(), "--trials", "1", "--rho", "0", "roundtrip"}).code == cli::kOk);
    const Json s = read(dir / "report.json").at("summary");
    CHECK(s.at("max_error").get<double>() == 0.0);
    CHECK(s.at("pass").get<bool>());
  }
  SUBCASE("report is reproducible and echoes the config") {
    const fs::path a = scratch("roundtrip_a");
    const fs::path b = scratch("roundtrip_b");
    REQUIRE(run({"--out-dir", a.string(), "--trials", "4", "roundtrip"}).code == cli::kOk);
    REQUIRE(run({"--out-dir", b.string(), "--trials", "4", "roundtrip"}).code == cli::kOk);
    Json ra = read(a / "report.json");
    Json rb = read(b / "report.json");
    ra.at("config").erase("out_dir");
    rb.at("config").erase("out_dir");
    CHECK(ra.dump() == rb.dump());
    CHECK(ra.contains("version"));
    CHECK(ra.at("config").at("seed") == 42);
    CHECK(ra.at("trials").size() == 4);
    CHECK(ra.at("summary").at("percentiles").contains("p100"));
    CHECK_FALSE(ra.at("trials")[0].contains("time_ms"));
  }
  SUBCASE("timings are opt-in") {
    const fs::path dir = scratch("roundtrip_timed");
    REQUIRE(run({"--out-dir", dir.string(), "--trials", "2", "--timings", "roundtrip"}).code == cli::kOk);
    const Json rep = read(dir / "report.json");
    CHECK(rep.at("trials")[0].contains("time_ms"));
    CHECK(rep.at("summary").contains("median_time_ms"));
  }
  SUBCASE("stress decay does not crash") {
    const fs::path dir = scratch("roundtrip_stress");
    REQUIRE(run({"--out-dir", dir.string(), "--trials", "3", "--rho", "0.95", "roundtrip"}).code == cli::kOk);
    CHECK(read(dir / "report.json").at("trials").size() == 3);
  }
}

TEST_CASE("verify") {
  SUBCASE("stock fixtures pass") {
    const fs::path dir = scratch("verify_stock");
    const Run r = run({"--out-dir", dir.string(), "--mode", "exact", "verify", "--fixtures",
                       support::fixture("oracle_points.json")});
    REQUIRE(r.code == cli::kOk);
    const Json rep = read(dir / "report.json");
    CHECK(rep.at("ok").get<bool>());
    CHECK(rep.at("checks").size() > 100);
    CHECK(rep.at("checks")[0].contains("source"));
  }
  SUBCASE("negative control exits 5") {
    const fs::path dir = scratch("verify_negative");
    const Run r = run({"--out-dir", dir.string(), "verify", "--fixtures", support::fixture("negative_control.json")});
    CHECK(r.code == cli::kOracleMismatch);
    CHECK(r.err.find("mismatch") != std::string::npos);
    CHECK_FALSE(read(dir / "report.json").at("ok").get<bool>());
  }
  SUBCASE("empty set passes with a warning") {
    const fs::path dir = scratch("verify_empty");
    write(dir / "empty.json", Json::parse(R"({"points": []})"));
    const Run r = run({"--out-dir", dir.string(), "verify", "--fixtures", (dir / "empty.json").string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(read(dir / "report.json").contains("warning"));
  }
}

TEST_CASE("bad input exits 2") {
  const fs::path dir = scratch("bad_input");
  write(dir / "broken.json", Json::parse(R"({"eta": "x"})"));
  {
    std::ofstream f(dir / "garbage.json");
    f << "{not json";
  }
  CHECK(run({"--out-dir", dir.string(), "forward", (dir / "missing.json").string()}).code == cli::kBadInput);
  CHECK(run({"--out-dir", dir.string(), "forward", (dir / "broken.json").string()}).code == cli::kBadInput);
  CHECK(run({"--out-dir", dir.string(), "factor", (dir / "garbage.json").string()}).code == cli::kBadInput);
  CHECK(run({"--out-dir", dir.string(), "--mode", "exact", "roundtrip"}).code == cli::kBadInput);
  CHECK(run({"--out-dir", dir.string(), "--degree", "8", "--toeplitz-size", "4", "roundtrip"}).code == cli::kBadInput);
  CHECK(run({"--out-dir", dir.string(), "--degree", "8", "--grid", "16", "roundtrip"}).code == cli::kBadInput);
  CHECK(run({"--out-dir", dir.string(), "--tol", "0", "roundtrip"}).code == cli::kBadInput);
  CHECK(run({"--bogus"}).code == cli::kBadInput);
  CHECK(run({}).code == cli::kBadInput);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("config file with flags overriding") {
  const fs::path dir = scratch("config");
  {
    std::ofstream f(dir / "run.toml");
    f << "trials = 2\nseed = 7\nrho = 0.5\n";
  }
  REQUIRE(run({"--config", (dir / "run.toml").string(), "--seed", "9", "--out-dir", dir.string(), "roundtrip"}).code ==
          cli::kOk);
  const Json cfg = read(dir / "report.json").at("config");
  CHECK(cfg.at("trials") == 2);
  CHECK(cfg.at("seed") == 9);
  CHECK(cfg.at("rho").get<double>() == 0.5);
}
