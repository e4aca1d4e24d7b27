#include "loopfact/solver.hpp"

#include <cmath>
#include <numbers>

namespace loopfact {

namespace {

template <Coefficient T>
LaurentSeries<T> taylor_ratio(const LaurentSeries<T>& num, const LaurentSeries<T>& den, int degree, double zero_eps) {
  return ls_mul(num, ls_invert(den, Orientation::z, degree, zero_eps), IndexRange{0, degree});
}

template <Coefficient T>
T ratio_coeff(const MatrixLoop<T>& k, Side side, int n) {
  const auto r = side == Side::k2 ? taylor_ratio(k.at(1, 0), k.at(1, 1), n, 0.0)
                                  : taylor_ratio(k.at(0, 1), k.at(0, 0), n, 0.0);
  return r.coeff(n);
}

template <Coefficient T>
MatrixLoop<T> root_factor(const T& w, int n, Side side) {
  using S = LaurentSeries<T>;
  if (side == Side::k2) return {S::constant(T(1)), S::monomial(w, -n), S::monomial(-conj(w), n), S::constant(T(1))};
  return {S::constant(T(1)), S::monomial(-conj(w), n), S::monomial(w, -n), S::constant(T(1))};
}

// Solves for w_first..w_last so that the ratio series of the unnormalized
// product matches `target`, one order at a time: the coefficient of order n
// equals -conj(w_n) prod_{s<n} (1+|w_s|^2) plus a polynomial in the earlier w.
template <Coefficient T>
std::vector<T> peel(const BasicRatioSeries<T>& target, int first, int last, Side side) {
  using Real = typename ScalarTraits<T>::Real;
  std::vector<T> found;
  MatrixLoop<T> k;
  Real weight(1);
  for (int n = first; n <= last; ++n) {
    const T c = ratio_coeff(k, side, n);
    const T w = -conj((target.at(n) - c) / ScalarTraits<T>::from_real(weight));
    found.push_back(w);
    weight = weight * (Real(1) + ScalarTraits<T>::norm(w));
    if (!is_exact_zero(w)) k = ml_mul(root_factor(w, n, side), k);
  }
  return found;
}

template <Coefficient T>
LaurentSeries<T> drop_constant(const LaurentSeries<T>& s) {
  return ls_project(s, Part::strict_positive);
}

}  // namespace

template <Coefficient T>
BasicRatioSeries<T> xi_series(const MatrixLoop<T>& source, int degree, double zero_eps) {
  return {RatioKind::xi, drop_constant(taylor_ratio(source.at(1, 0), source.at(1, 1), degree, zero_eps))};
}

template <Coefficient T>
BasicRatioSeries<T> psi_series(const MatrixLoop<T>& l, int degree, double zero_eps) {
  return {RatioKind::psi, taylor_ratio(ls_star(l.at(1, 0)), ls_star(l.at(0, 0)), degree, zero_eps)};
}

template <Coefficient T>
std::vector<T> solve_zeta(const BasicRatioSeries<T>& xi, int degree) {
  return peel(xi, 1, degree, Side::k2);
}

template <Coefficient T>
std::vector<T> solve_eta(const BasicRatioSeries<T>& psi, int degree) {
  return peel(psi, 0, degree, Side::k1);
}

template <Coefficient T>
BasicCoordinates<T> solve_eta_zeta(const BasicTriangular<T>& t, int degree) {
  BasicCoordinates<T> c;
  c.eta = solve_eta(psi_series(t.l, degree), degree);
  c.zeta = solve_zeta(xi_series(t.u, degree), degree);
  c.chi_plus.assign(static_cast<std::size_t>(degree), T(0));
  return c;
}

ChiSolution solve_chi(const TriangularFactorization& t, double a1, double a2, int grid, int degree, double tol) {
  if (grid < 4 * degree || grid < 1) throw GridTooSmall(grid, 4 * degree);
  const auto l = ml_sample(t.l, grid);
  const auto u = ml_sample(t.u, grid);
  std::vector<Complex> r(static_cast<std::size_t>(grid));
  std::vector<Complex> gap(static_cast<std::size_t>(grid));
  ChiSolution out;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double from_u = std::log(a2) - 0.5 * std::log(std::norm(u[k][1][0]) + std::norm(u[k][1][1]));
    const double from_l = -std::log(a1) - 0.5 * std::log(std::norm(l[k][0][0]) + std::norm(l[k][1][0]));
    if (!std::isfinite(from_u) || !std::isfinite(from_l)) throw NotUnitary(std::numeric_limits<double>::infinity());
    out.raw_discrepancy = std::max(out.raw_discrepancy, std::abs(from_u - from_l));
    r[k] = from_u;
    gap[k] = from_u - from_l;
  }
  // Re chi_+ is a trigonometric polynomial of degree N; compare the two
  // formulas on that band.
  for (const Complex& v : ls_sample(ls_from_samples(gap, {-degree, degree}), grid)) {
    out.discrepancy = std::max(out.discrepancy, std::abs(v));
  }
  if (out.discrepancy > tol) throw NotUnitary(out.discrepancy);

  const int half = grid / 2;
  const auto fourier = ls_from_samples(r, {0, std::max(half, degree)});
  out.chi0_im = std::arg(t.m0);
  for (int j = 1; j <= degree; ++j) out.chi_plus.push_back(2.0 * fourier.coeff(j));
  for (int j = degree + 1; j < half; ++j) out.tail = std::max(out.tail, std::abs(fourier.coeff(j)));
  return out;
}

std::vector<Complex> solve_zeta_from_plus(const MatrixLoop<Complex>& g_plus, int degree) {
  return solve_zeta(xi_series(g_plus, degree), degree);
}

SolveResult solve_all(const MatrixLoop<Complex>& g, const SolveOptions& options) {
  const int n = options.degree;
  const BirkhoffFactorization b = birkhoff_factor(g, options.section_size, options.max_condition);
  const TriangularFactorization t = triangular_from_birkhoff(b);

  SolveResult result;
  result.coords.zeta = solve_zeta_from_plus(b.g_plus, n);
  result.coords.eta = solve_eta(psi_series(t.l, n), n);
  result.diagnostics.condition_estimate = b.condition_estimate.value_or(0.0);
  result.diagnostics.positive_residual = b.positive_residual;
  const auto product = ml_mul(ml_mul(b.g_minus, MatrixLoop<Complex>::constant(b.g_zero)), b.g_plus);
  result.diagnostics.birkhoff_residual = max_abs_diff(product, g, intersect(product.reliable(), g.window()));

  const auto [a1, a2] = norm_constants(result.coords);
  try {
    const ChiSolution chi = solve_chi(t, a1, a2, options.grid, n, options.unitary_tol);
    result.coords.chi0_im = chi.chi0_im;
    result.coords.chi_plus = chi.chi_plus;
    result.chi_available = true;
    result.diagnostics.unitary = true;
    result.diagnostics.chi_discrepancy = chi.discrepancy;
    result.diagnostics.chi_tail = chi.tail;
    result.diagnostics.chi_raw_discrepancy = chi.raw_discrepancy;
  } catch (const NotUnitary& e) {
    result.diagnostics.unitary = false;
    result.diagnostics.chi_discrepancy = e.discrepancy();
  }
  return result;
}

#define LOOPFACT_INSTANTIATE(T)                                                                 \
  template BasicRatioSeries<T> xi_series<T>(const MatrixLoop<T>&, int, double);                \
  template BasicRatioSeries<T> psi_series<T>(const MatrixLoop<T>&, int, double);               \
  template std::vector<T> solve_zeta<T>(const BasicRatioSeries<T>&, int);                      \
  template std::vector<T> solve_eta<T>(const BasicRatioSeries<T>&, int);                       \
  template BasicCoordinates<T> solve_eta_zeta<T>(const BasicTriangular<T>&, int);

LOOPFACT_INSTANTIATE(Complex)
LOOPFACT_INSTANTIATE(GaussianRational)

}  // namespace loopfact
