#pragma once

// 2x2 matrices of Laurent series: loops into GL(2), SU(2) on the circle.

#include <array>
#include <optional>

#include "loopfact/series.hpp"

namespace loopfact {

template <Coefficient T>
using Mat2 = std::array<std::array<T, 2>, 2>;

template <Coefficient T>
Mat2<T> mat2_identity() {
  return {{{T(1), T(0)}, {T(0), T(1)}}};
}

template <Coefficient T>
Mat2<T> mat2_mul(const Mat2<T>& a, const Mat2<T>& b) {
  Mat2<T> c;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  }
  return c;
}

template <Coefficient T>
T mat2_det(const Mat2<T>& a) {
  return a[0][0] * a[1][1] - a[0][1] * a[1][0];
}

template <Coefficient T>
Mat2<T> mat2_inverse(const Mat2<T>& a) {
  const T d = mat2_det(a);
  return {{{a[1][1] / d, -a[0][1] / d}, {-a[1][0] / d, a[0][0] / d}}};
}

template <Coefficient T>
class MatrixLoop {
 public:
  using Series = LaurentSeries<T>;

  MatrixLoop() : MatrixLoop(Series::constant(T(1)), Series(), Series(), Series::constant(T(1))) {}

  /// Entries are padded to a common window and share the narrowest reach.
  MatrixLoop(const Series& a11, const Series& a12, const Series& a21, const Series& a22) {
    const std::array<const Series*, 4> in{&a11, &a12, &a21, &a22};
    int lo = a11.lo();
    int hi = a11.hi();
    std::int64_t rlo = a11.reach_lo();
    std::int64_t rhi = a11.reach_hi();
    for (const Series* s : in) {
      lo = std::min(lo, s->lo());
      hi = std::max(hi, s->hi());
      rlo = std::max(rlo, s->reach_lo());
      rhi = std::min(rhi, s->reach_hi());
    }
    for (std::size_t k = 0; k < 4; ++k) {
      std::vector<T> c(static_cast<std::size_t>(hi - lo + 1), T(0));
      for (int n = in[k]->lo(); n <= in[k]->hi(); ++n) c[static_cast<std::size_t>(n - lo)] = in[k]->coeff(n);
      e_[k] = Series(lo, std::move(c), rlo, rhi);
    }
  }

  static MatrixLoop identity() { return {}; }
  static MatrixLoop constant(const Mat2<T>& m) {
    return {Series::constant(m[0][0]), Series::constant(m[0][1]), Series::constant(m[1][0]),
            Series::constant(m[1][1])};
  }
  static MatrixLoop diagonal(const Series& a, const Series& d) { return {a, Series(), Series(), d}; }

  /// Entry (i, j), zero-based.
  const Series& at(int i, int j) const { return e_[static_cast<std::size_t>(2 * i + j)]; }

  IndexRange window() const { return e_[0].window(); }
  IndexRange reliable() const { return e_[0].reliable(); }
  bool is_polynomial() const { return e_[0].is_polynomial(); }

  /// Matrix coefficient of z^n.
  Mat2<T> coeff(int n) const {
    return {{{at(0, 0).coeff(n), at(0, 1).coeff(n)}, {at(1, 0).coeff(n), at(1, 1).coeff(n)}}};
  }

 private:
  std::array<Series, 4> e_;
};

template <Coefficient T>
MatrixLoop<T> ml_mul(const MatrixLoop<T>& a, const MatrixLoop<T>& b, std::optional<IndexRange> out = std::nullopt) {
  auto entry = [&](int i, int j) {
    return ls_add(ls_mul(a.at(i, 0), b.at(0, j), out), ls_mul(a.at(i, 1), b.at(1, j), out));
  };
  return {entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)};
}

template <Coefficient T>
MatrixLoop<T> ml_star(const MatrixLoop<T>& a) {
  return {ls_star(a.at(0, 0)), ls_star(a.at(1, 0)), ls_star(a.at(0, 1)), ls_star(a.at(1, 1))};
}

template <Coefficient T>
LaurentSeries<T> ml_det(const MatrixLoop<T>& a, std::optional<IndexRange> out = std::nullopt) {
  return ls_mul(a.at(0, 0), a.at(1, 1), out) - ls_mul(a.at(0, 1), a.at(1, 0), out);
}

template <Coefficient T>
MatrixLoop<T> ml_scale(const MatrixLoop<T>& a, const T& s) {
  return {ls_scale(a.at(0, 0), s), ls_scale(a.at(0, 1), s), ls_scale(a.at(1, 0), s), ls_scale(a.at(1, 1), s)};
}

template <Coefficient T>
MatrixLoop<T> ml_constant_left(const Mat2<T>& m, const MatrixLoop<T>& a) {
  return ml_mul(MatrixLoop<T>::constant(m), a);
}

template <Coefficient T>
MatrixLoop<T> ml_project(const MatrixLoop<T>& a, Part part) {
  return {ls_project(a.at(0, 0), part), ls_project(a.at(0, 1), part), ls_project(a.at(1, 0), part),
          ls_project(a.at(1, 1), part)};
}

template <Coefficient T>
MatrixLoop<T> ml_truncate(const MatrixLoop<T>& a, IndexRange out) {
  return {ls_truncate(a.at(0, 0), out), ls_truncate(a.at(0, 1), out), ls_truncate(a.at(1, 0), out),
          ls_truncate(a.at(1, 1), out)};
}

/// Largest entrywise coefficient difference over the overlap of reliable windows
/// (or over `on`).
template <Coefficient T>
double max_abs_diff(const MatrixLoop<T>& a, const MatrixLoop<T>& b, std::optional<IndexRange> on = std::nullopt) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) d = std::max(d, max_abs_diff(a.at(i, j), b.at(i, j), on));
  }
  return d;
}

/// max over the grid of the operator norm of A(z)A(z)* - I.
double ml_unitary_defect(const MatrixLoop<Complex>& a, int grid);

/// Values of the four entries at the grid points, indexed [point][i][j].
std::vector<Mat2<Complex>> ml_sample(const MatrixLoop<Complex>& a, int grid);

}  // namespace loopfact
