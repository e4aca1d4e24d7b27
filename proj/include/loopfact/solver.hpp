#pragma once

// Inverse direction: recover (eta, chi, zeta) from factorization data by
// peeling the Taylor coefficients of l21^*/l11^* and u21/u22 order by order.

#include <optional>
#include <vector>

#include "loopfact/factorization.hpp"

namespace loopfact {

enum class RatioKind { psi, xi };

/// Taylor coefficients psi_0.. (k1 side) or xi_1.. (k2 side, xi_0 = 0).
template <Coefficient T>
struct BasicRatioSeries {
  RatioKind kind = RatioKind::xi;
  LaurentSeries<T> coeffs;

  T at(int n) const { return coeffs.coeff(n); }
};

using RatioSeries = BasicRatioSeries<Complex>;

/// source21 / source22 for source = u or g_+.
template <Coefficient T>
BasicRatioSeries<T> xi_series(const MatrixLoop<T>& source, int degree, double zero_eps = kDefaultZeroEpsilon);

/// l21^* / l11^*.
template <Coefficient T>
BasicRatioSeries<T> psi_series(const MatrixLoop<T>& l, int degree, double zero_eps = kDefaultZeroEpsilon);

/// zeta_1..zeta_N.
template <Coefficient T>
std::vector<T> solve_zeta(const BasicRatioSeries<T>& xi, int degree);

/// eta_0..eta_N.
template <Coefficient T>
std::vector<T> solve_eta(const BasicRatioSeries<T>& psi, int degree);

/// eta and zeta from a triangular factorization; chi is left zero.
template <Coefficient T>
BasicCoordinates<T> solve_eta_zeta(const BasicTriangular<T>& t, int degree);

struct ChiSolution {
  double chi0_im = 0.0;
  std::vector<Complex> chi_plus;
  /// max over the grid of the degree-N band of Re chi_+ (l formula) - Re chi_+ (u formula)
  double discrepancy = 0.0;
  /// same difference sampled pointwise, including truncation noise above the band
  double raw_discrepancy = 0.0;
  /// largest Fourier coefficient of Re chi_+ beyond the truncation degree
  double tail = 0.0;
};

/// Throws NotUnitary if the two formulas disagree by more than `tol`.
ChiSolution solve_chi(const TriangularFactorization& t, double a1, double a2, int grid, int degree, double tol);

struct SolveOptions {
  int degree = 8;
  int section_size = 24;
  int grid = 64;
  double tol = 1e-8;
  /// NotUnitary threshold for the two Re(chi_+) formulas.
  double unitary_tol = 1e-6;
  double max_condition = kMaxSectionCondition;
};

struct SolveDiagnostics {
  double condition_estimate = 0.0;
  double positive_residual = 0.0;
  double birkhoff_residual = 0.0;
  bool unitary = false;
  std::optional<double> chi_discrepancy;
  std::optional<double> chi_tail;
  std::optional<double> chi_raw_discrepancy;
};

struct SolveResult {
  RootSubgroupCoordinates coords;
  bool chi_available = false;
  SolveDiagnostics diagnostics;
};

SolveResult solve_all(const MatrixLoop<Complex>& g, const SolveOptions& options);

/// zeta from g_+ alone.
std::vector<Complex> solve_zeta_from_plus(const MatrixLoop<Complex>& g_plus, int degree);

}  // namespace loopfact
