#pragma once

// Generic direction: Birkhoff factorization g = g_- g_0 g_+ from finite
// sections of the block Toeplitz operator of g, and the triangular
// factorization g = l m a u derived from it.

#include <optional>
#include <vector>

#include "loopfact/assembly.hpp"

namespace loopfact {

inline constexpr double kMaxSectionCondition = 1e12;

/// Default section size for truncation degree N.
inline int default_section_size(int degree) { return 2 * degree + 8; }

/// Row-major 2(M+1) x 2(M+1) matrix; block (k, j) is the coefficient g_{k-j}.
struct ToeplitzSection {
  int section_size = 0;
  std::vector<Complex> matrix;

  int dim() const { return 2 * (section_size + 1); }
  Complex at(int row, int col) const { return matrix[static_cast<std::size_t>(row * dim() + col)]; }
};

/// g_- (nonpositive powers, I at infinity), g_0 constant, g_+ (nonnegative powers, I at 0).
template <Coefficient T>
struct BasicBirkhoff {
  MatrixLoop<T> g_minus;
  Mat2<T> g_zero = mat2_identity<T>();
  MatrixLoop<T> g_plus;
  std::optional<double> condition_estimate;
  /// Largest positive-power coefficient of g h left over by the section solve.
  double positive_residual = 0.0;
};

using BirkhoffFactorization = BasicBirkhoff<Complex>;

template <Coefficient T>
struct Ldu {
  Mat2<T> lower;
  Mat2<T> diagonal;
  Mat2<T> upper;
};

ToeplitzSection toeplitz_section(const MatrixLoop<Complex>& g, int section_size);

/// Throws NotTopStratum when the section is singular or its condition estimate
/// exceeds `max_condition`.
BirkhoffFactorization birkhoff_factor(const MatrixLoop<Complex>& g, int section_size,
                                      double max_condition = kMaxSectionCondition);

template <Coefficient T>
Ldu<T> ldu_2x2(const Mat2<T>& g0, double eps = kDefaultZeroEpsilon);

/// l = g_- L0, u = U0 g_+, m0 a0 = (D0)_11.
template <Coefficient T>
BasicTriangular<T> triangular_from_birkhoff(const BasicBirkhoff<T>& b, double eps = kDefaultZeroEpsilon);

TriangularFactorization triangular_factor(const MatrixLoop<Complex>& g, int section_size,
                                          double max_condition = kMaxSectionCondition);

template <Coefficient T>
BasicBirkhoff<T> triangular_to_birkhoff(const BasicTriangular<T>& t);

}  // namespace loopfact
