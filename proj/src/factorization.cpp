#include "loopfact/factorization.hpp"

#include <Eigen/Dense>

namespace loopfact {

ToeplitzSection toeplitz_section(const MatrixLoop<Complex>& g, int section_size) {
  if (section_size < 0) throw InvalidInput("section size must be nonnegative");
  ToeplitzSection s{section_size, {}};
  const int dim = s.dim();
  s.matrix.assign(static_cast<std::size_t>(dim * dim), Complex(0.0));
  for (int k = 0; k <= section_size; ++k) {
    for (int j = 0; j <= section_size; ++j) {
      const Mat2<Complex> block = g.coeff(k - j);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) s.matrix[static_cast<std::size_t>((2 * k + a) * dim + 2 * j + b)] = block[a][b];
      }
    }
  }
  return s;
}

namespace {

using SeriesC = LaurentSeries<Complex>;

SeriesC set_constant(const SeriesC& s, Complex value) {
  const int lo = std::min(s.lo(), 0);
  const int hi = std::max(s.hi(), 0);
  std::vector<Complex> c(static_cast<std::size_t>(hi - lo + 1));
  for (int n = lo; n <= hi; ++n) c[static_cast<std::size_t>(n - lo)] = n == 0 ? value : s.coeff(n);
  return {lo, std::move(c), s.reach_lo(), s.reach_hi()};
}

// Only the first half of a finite-section solution is trusted: the error from
// cutting the section at M grows toward index M.
MatrixLoop<Complex> cap_reach(const MatrixLoop<Complex>& m, std::int64_t hi) {
  auto cap = [&](const SeriesC& s) { return SeriesC(s.lo(), {s.coeffs().begin(), s.coeffs().end()}, s.reach_lo(), std::min(s.reach_hi(), hi)); };
  return {cap(m.at(0, 0)), cap(m.at(0, 1)), cap(m.at(1, 0)), cap(m.at(1, 1))};
}

MatrixLoop<Complex> with_identity_constant(const MatrixLoop<Complex>& m) {
  return {set_constant(m.at(0, 0), 1.0), set_constant(m.at(0, 1), 0.0), set_constant(m.at(1, 0), 0.0),
          set_constant(m.at(1, 1), 1.0)};
}

}  // namespace

BirkhoffFactorization birkhoff_factor(const MatrixLoop<Complex>& g, int section_size, double max_condition) {
  const ToeplitzSection s = toeplitz_section(g, section_size);
  const int dim = s.dim();
  Eigen::MatrixXcd a(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) a(r, c) = s.at(r, c);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const double rcond = lu.rcond();
  const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(condition <= max_condition)) throw NotTopStratum(condition);

  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(dim, 2);
  rhs(0, 0) = 1.0;
  rhs(1, 1) = 1.0;
  const Eigen::MatrixXcd x = lu.solve(rhs);

  // h = (g_0 g_+)^{-1}; column c of coefficient H_k is x.col(c).segment(2k, 2).
  const std::int64_t reach = section_size;
  auto h_entry = [&](int i, int j) {
    std::vector<Complex> c(static_cast<std::size_t>(section_size + 1));
    for (int k = 0; k <= section_size; ++k) c[static_cast<std::size_t>(k)] = x(2 * k + i, j);
    return SeriesC(0, std::move(c), -detail::kUnbounded, reach);
  };
  const MatrixLoop<Complex> h(h_entry(0, 0), h_entry(0, 1), h_entry(1, 0), h_entry(1, 1));

  const Mat2<Complex> h0 = h.coeff(0);
  if (std::abs(mat2_det(h0)) <= kDefaultZeroEpsilon) throw NotTopStratum(condition);
  const Mat2<Complex> g0 = mat2_inverse(h0);

  const IndexRange plus_window{0, section_size};
  const SeriesC inv_det = ls_invert(ml_det(h, plus_window), Orientation::z, section_size);
  const MatrixLoop<Complex> adj(h.at(1, 1), -h.at(0, 1), -h.at(1, 0), h.at(0, 0));
  MatrixLoop<Complex> g_plus = ml_mul(MatrixLoop<Complex>::constant(mat2_inverse(g0)),
                                      ml_mul(adj, MatrixLoop<Complex>::diagonal(inv_det, inv_det), plus_window));
  g_plus = cap_reach(with_identity_constant(ml_project(g_plus, Part::nonnegative)), section_size / 2);

  const MatrixLoop<Complex> gh = ml_mul(g, h);
  const MatrixLoop<Complex> g_minus = with_identity_constant(ml_project(gh, Part::nonpositive));

  double residual = 0.0;
  const MatrixLoop<Complex> positive = ml_project(gh, Part::strict_positive);
  for (int n = std::max(1, positive.window().lo); n <= positive.window().hi; ++n) {
    const Mat2<Complex> m = positive.coeff(n);
    for (const auto& row : m) {
      for (const auto& v : row) residual = std::max(residual, std::abs(v));
    }
  }
  return {g_minus, g0, g_plus, condition, residual};
}

template <Coefficient T>
Ldu<T> ldu_2x2(const Mat2<T>& g0, double eps) {
  const T d = g0[0][0];
  if (ScalarTraits<T>::is_zero(d, eps)) throw NoTriangularFactorization();
  return {{{{T(1), T(0)}, {g0[1][0] / d, T(1)}}},
          {{{d, T(0)}, {T(0), mat2_det(g0) / d}}},
          {{{T(1), g0[0][1] / d}, {T(0), T(1)}}}};
}

template <Coefficient T>
BasicTriangular<T> triangular_from_birkhoff(const BasicBirkhoff<T>& b, double eps) {
  const Ldu<T> f = ldu_2x2(b.g_zero, eps);
  const T d = f.diagonal[0][0];
  const auto a0 = modulus(d);
  const T m0 = d / ScalarTraits<T>::from_real(a0);
  auto l = ml_mul(b.g_minus, MatrixLoop<T>::constant(f.lower));
  auto u = ml_mul(MatrixLoop<T>::constant(f.upper), b.g_plus);
  return {std::move(l), m0, a0, std::move(u), mat2_det(b.g_zero)};
}

TriangularFactorization triangular_factor(const MatrixLoop<Complex>& g, int section_size, double max_condition) {
  return triangular_from_birkhoff(birkhoff_factor(g, section_size, max_condition));
}

template <Coefficient T>
BasicBirkhoff<T> triangular_to_birkhoff(const BasicTriangular<T>& t) {
  const T l21_inf = t.l.at(1, 0).coeff(0);
  const T u12_0 = t.u.at(0, 1).coeff(0);
  const MatrixLoop<T> g_minus(t.l.at(0, 0) - ls_scale(t.l.at(0, 1), l21_inf), t.l.at(0, 1),
                              t.l.at(1, 0) - ls_scale(t.l.at(1, 1), l21_inf), t.l.at(1, 1));
  const MatrixLoop<T> g_plus(t.u.at(0, 0) - ls_scale(t.u.at(1, 0), u12_0), t.u.at(0, 1) - ls_scale(t.u.at(1, 1), u12_0),
                             t.u.at(1, 0), t.u.at(1, 1));
  const T d = ScalarTraits<T>::from_real(t.a0) * t.m0;
  const Mat2<T> lower{{{T(1), T(0)}, {l21_inf, T(1)}}};
  const Mat2<T> diag{{{d, T(0)}, {T(0), t.det0 / d}}};
  const Mat2<T> upper{{{T(1), u12_0}, {T(0), T(1)}}};
  return {g_minus, mat2_mul(mat2_mul(lower, diag), upper), g_plus, std::nullopt, 0.0};
}

template Ldu<Complex> ldu_2x2<Complex>(const Mat2<Complex>&, double);
template Ldu<GaussianRational> ldu_2x2<GaussianRational>(const Mat2<GaussianRational>&, double);
template BasicTriangular<Complex> triangular_from_birkhoff<Complex>(const BasicBirkhoff<Complex>&, double);
template BasicTriangular<GaussianRational> triangular_from_birkhoff<GaussianRational>(
    const BasicBirkhoff<GaussianRational>&, double);
template BasicBirkhoff<Complex> triangular_to_birkhoff<Complex>(const BasicTriangular<Complex>&);
template BasicBirkhoff<GaussianRational> triangular_to_birkhoff<GaussianRational>(
    const BasicTriangular<GaussianRational>&);

}  // namespace loopfact
