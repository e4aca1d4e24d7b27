#include "support.hpp"

using namespace loopfact;
using S = LaurentSeries<Complex>;
using L = MatrixLoop<Complex>;

namespace {

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

RatioSeries ratio(RatioKind kind, int lo, std::vector<Complex> c) { return {kind, S(lo, std::move(c))}; }

// g with one Fourier coefficient of entry (i, j) scaled by 1.1
L scale_coefficient(const L& g, int i, int j, int n) {
  std::array<S, 4> e{g.at(0, 0), g.at(0, 1), g.at(1, 0), g.at(1, 1)};
  S& s = e[static_cast<std::size_t>(2 * i + j)];
  s = s + S(n, {0.1 * s.coeff(n)});
  return {e[0], e[1], e[2], e[3]};
}

}  // namespace

TEST_CASE("xi_series") {
  SUBCASE("u = I") {
    const auto xi = xi_series(L::identity(), 6);
    for (int n = 0; n <= 6; ++n) CHECK(xi.at(n) == Complex(0.0));
  }
  SUBCASE("single factor") {
    const Complex w(0.4, -0.7);
    const L u(S::constant(1.0), S(), S(1, {-std::conj(w)}), S::constant(1.0));
    const auto xi = xi_series(u, 6);
    CHECK(xi.kind == RatioKind::xi);
    CHECK(xi.at(0) == Complex(0.0));
    CHECK(xi.at(1) == -std::conj(w));
    for (int n = 2; n <= 6; ++n) CHECK(xi.at(n) == Complex(0.0));
  }
  SUBCASE("exact u from coordinates matches the enumeration") {
    BasicCoordinates<Exact> c;
    c.zeta = {support::q("3/4"), support::q("0", "4/3"), support::q("-5/12")};
    const auto t = assemble_triangular(c);
    const auto xi = xi_series(t.u, 8);
    for (int n = 1; n <= 8; ++n) CHECK(xi.at(n) == xi_enum<Exact>(c.zeta, n));
  }
  SUBCASE("zero constant term") {
    const L u(S::constant(1.0), S(), S(1, {1.0}), S(1, {1.0}));
    CHECK_THROWS_AS(xi_series(u, 4), ZeroConstantTerm);
  }
}

TEST_CASE("psi_series") {
  SUBCASE("l = I") {
    const auto psi = psi_series(L::identity(), 6);
    for (int n = 0; n <= 6; ++n) CHECK(psi.at(n) == Complex(0.0));
  }
  SUBCASE("l of k1(eta_0)^*") {
    const Complex e(0.6, 0.2);
    RootSubgroupCoordinates c;
    c.eta = {e};
    const auto t = triangular_factor(assemble_loop(c), 8);
    CHECK(std::abs(t.l.at(1, 0).coeff(0) + e) < 1e-14);
    CHECK(std::abs(t.l.at(0, 0).coeff(0) - 1.0) < 1e-14);
    CHECK(std::abs(psi_series(t.l, 4).at(0) + std::conj(e)) < 1e-14);
  }
  SUBCASE("exact l from coordinates matches the enumeration") {
    BasicCoordinates<Exact> c;
    c.eta = {support::q("3/4"), support::q("0", "-5/12"), support::q("4/3")};
    const auto t = assemble_triangular(c);
    const auto psi = psi_series(t.l, 8);
    for (int n = 0; n <= 8; ++n) CHECK(psi.at(n) == psi_enum<Exact>(c.eta, n));
  }
}

TEST_CASE("solve_zeta") {
  SUBCASE("xi = 0") {
    const auto z = solve_zeta(ratio(RatioKind::xi, 1, {0.0, 0.0, 0.0}), 3);
    CHECK(max_diff(z, {0.0, 0.0, 0.0}) == 0.0);
  }
  SUBCASE("forward then invert") {
    RootSubgroupCoordinates c;
    c.zeta = {0.3, {0.1, -0.2}, {0.0, 0.05}};
    const auto xi = xi_series(triangular_factor(assemble_loop(c), 14).u, 3);
    CHECK(max_diff(solve_zeta(xi, 3), c.zeta) <= 1e-10);
  }
  SUBCASE("only xi_1 set") {
    const Complex w(0.25, 0.5);
    const auto z = solve_zeta(ratio(RatioKind::xi, 1, {-std::conj(w)}), 5);
    CHECK(z[0] == w);
    // re-applying the ratio reproduces the input; a lone factor has no tail to cancel
    const auto k = k2_product<Complex>(z, false);
    const auto back = xi_series(k, 5);
    CHECK(std::abs(back.at(1) + std::conj(w)) < 1e-15);
    for (int n = 2; n <= 5; ++n) CHECK(std::abs(back.at(n)) < 1e-15);
    for (std::size_t k = 1; k < z.size(); ++k) CHECK(z[k] == Complex(0.0));
  }
  SUBCASE("exact peeling of the product ratios") {
    for (const auto& p : support::fixture_points("ratio_coeffs.json")) {
      if (p.side != Side::k2) continue;
      CAPTURE(p.name);
      const Json j = read_json_file(support::fixture("ratio_coeffs.json"));
      std::vector<Exact> coeffs;
      for (const auto& entry : j.at("points")) {
        if (entry.at("name") != p.name) continue;
        for (const auto& v : entry.at("ratio")) coeffs.push_back(scalar_from_json<Exact>(v));
      }
      const auto z = solve_zeta(BasicRatioSeries<Exact>{RatioKind::xi, LaurentSeries<Exact>(0, coeffs)}, p.n_max);
      for (int n = 0; n < p.n_max; ++n) {
        const std::size_t k = static_cast<std::size_t>(n);
        CHECK(z[k] == (k < p.values.size() ? p.values[k] : Exact(0)));
      }
    }
  }
}

TEST_CASE("solve_eta") {
  SUBCASE("psi = 0") {
    const auto e = solve_eta(ratio(RatioKind::psi, 0, {0.0, 0.0}), 1);
    CHECK(max_diff(e, {0.0, 0.0}) == 0.0);
  }
  SUBCASE("psi_0 only, one variable") {
    const Complex e(-0.3, 0.9);
    CHECK(solve_eta(ratio(RatioKind::psi, 0, {-std::conj(e)}), 0) == std::vector<Complex>{e});
  }
  SUBCASE("random eta, N = 8") {
    RootSubgroupCoordinates c = support::random_coords(44, 8, 0.6, true, false);
    c.zeta.assign(8, 0.0);
    const auto t = triangular_factor(assemble_loop(c), 24);
    CHECK(max_diff(solve_eta(psi_series(t.l, 8), 8), c.eta) <= 1e-8);
  }
  SUBCASE("exact peeling of the product ratios") {
    const Json j = read_json_file(support::fixture("ratio_coeffs.json"));
    for (const auto& p : support::fixture_points("ratio_coeffs.json")) {
      if (p.side != Side::k1) continue;
      CAPTURE(p.name);
      std::vector<Exact> coeffs;
      for (const auto& entry : j.at("points")) {
        if (entry.at("name") != p.name) continue;
        for (const auto& v : entry.at("ratio")) coeffs.push_back(scalar_from_json<Exact>(v));
      }
      const auto e = solve_eta(BasicRatioSeries<Exact>{RatioKind::psi, LaurentSeries<Exact>(0, coeffs)}, p.n_max);
      REQUIRE(e.size() == static_cast<std::size_t>(p.n_max + 1));
      for (std::size_t k = 0; k < e.size(); ++k) CHECK(e[k] == (k < p.values.size() ? p.values[k] : Exact(0)));
    }
  }
}

TEST_CASE("solve_chi") {
  SUBCASE("chi = 0") {
    RootSubgroupCoordinates c = support::random_coords(9, 6, 0.6, true, false);
    const auto [a1, a2] = norm_constants(c);
    const auto chi = solve_chi(assemble_triangular(c), a1, a2, 48, 6, 1e-8);
    CHECK(chi.discrepancy <= 1e-10);
    CHECK(chi.chi0_im == doctest::Approx(0.0));
    for (const Complex& x : chi.chi_plus) CHECK(std::abs(x) <= 1e-10);
  }
  SUBCASE("chi_1 and chi_0 alone") {
    RootSubgroupCoordinates c;
    c.chi_plus = {{0.2, 0.1}};
    c.chi0_im = 0.3;
    const auto chi = solve_chi(assemble_triangular(c), 1.0, 1.0, 64, 8, 1e-8);
    REQUIRE(chi.chi_plus.size() == 8);
    CHECK(std::abs(chi.chi_plus[0] - Complex(0.2, 0.1)) <= 1e-9);
    for (std::size_t k = 1; k < 8; ++k) CHECK(std::abs(chi.chi_plus[k]) <= 1e-9);
    CHECK(std::abs(chi.chi0_im - 0.3) <= 1e-9);
  }
  SUBCASE("non-unitary loop") {
    const L g = scale_coefficient(assemble_loop(support::random_coords(3, 8)), 1, 0, 1);
    const auto t = triangular_factor(g, 24);
    const auto c = solve_eta_zeta(t, 8);
    const auto [a1, a2] = norm_constants(c);
    CHECK_THROWS_AS(solve_chi(t, a1, a2, 64, 8, 1e-6), NotUnitary);
  }
  SUBCASE("grid too small") {
    CHECK_THROWS_AS(solve_chi(assemble_triangular(RootSubgroupCoordinates{}), 1.0, 1.0, 8, 8, 1e-8), GridTooSmall);
  }
}

TEST_CASE("solve_all") {
  SolveOptions o;
  SUBCASE("I") {
    const auto r = solve_all(L::identity(), o);
    CHECK(r.chi_available);
    CHECK(r.diagnostics.unitary);
    for (const Complex& x : r.coords.eta) CHECK(std::abs(x) < 1e-14);
    for (const Complex& x : r.coords.zeta) CHECK(std::abs(x) < 1e-14);
    for (const Complex& x : r.coords.chi_plus) CHECK(std::abs(x) < 1e-14);
    CHECK(std::abs(r.coords.chi0_im) < 1e-14);
  }
  SUBCASE("random coordinates, N = 8") {
    const auto c = support::random_coords(77, 8);
    const auto r = solve_all(assemble_loop(c), o);
    REQUIRE(r.chi_available);
    CHECK(max_diff(r.coords.eta, c.eta) <= 1e-8);
    CHECK(max_diff(r.coords.zeta, c.zeta) <= 1e-8);
    CHECK(max_diff(r.coords.chi_plus, c.chi_plus) <= 1e-8);
    CHECK(std::abs(r.coords.chi0_im - c.chi0_im) <= 1e-8);
    CHECK(r.diagnostics.birkhoff_residual <= 1e-9);
  }
  SUBCASE("non-unitary perturbation") {
    const auto c = support::random_coords(78, 8);
    const auto r = solve_all(scale_coefficient(assemble_loop(c), 0, 0, 0), o);
    CHECK_FALSE(r.chi_available);
    CHECK_FALSE(r.diagnostics.unitary);
    CHECK(r.coords.eta.size() == 9);
    CHECK(r.coords.zeta.size() == 8);
    REQUIRE(r.diagnostics.chi_discrepancy.has_value());
    CHECK(*r.diagnostics.chi_discrepancy > o.unitary_tol);
  }
  SUBCASE("not in the top stratum") {
    CHECK_THROWS_AS(solve_all(L::diagonal(S(1, {1.0}), S(-1, {1.0})), o), NotTopStratum);
  }
}

TEST_CASE("zeta from g_plus ignores g_minus and g_0") {
  const L g = assemble_loop(support::random_coords(90, 8));
  const auto b = birkhoff_factor(g, 24);
  const auto from_plus = solve_zeta_from_plus(b.g_plus, 8);
  const auto t = triangular_from_birkhoff(b);
  CHECK(max_diff(from_plus, solve_zeta(xi_series(t.u, 8), 8)) <= 1e-12);
  // another g_minus g_0 in front leaves g_plus alone
  const L h = ml_mul(L(S::constant(2.0), S(-1, {0.5}), S(-2, {0.1}), S::constant(0.5)), g);
  const auto bh = birkhoff_factor(h, 24);
  CHECK(max_diff(solve_zeta_from_plus(bh.g_plus, 8), from_plus) <= 1e-10);
}
