#pragma once

// Exact brute-force checks of the coefficient formulas for the k1/k2 products.
// The product expansion here uses its own polynomial arithmetic, independent
// of the series module.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopfact/rootsub.hpp"

namespace loopfact {

using Exact = GaussianRational;

/// Which enumerator the lemma check compares against.
enum class Mutation { none, drop_j_less_than_i };

struct ExactPoint {
  std::string name;
  Side side = Side::k2;
  /// zeta_1.. for k2, eta_0.. for k1
  std::vector<Exact> values;
  int n_max = 8;
  Mutation mutation = Mutation::none;
};

struct OracleCheck {
  std::string name;
  int n = 0;
  bool ok = false;
  std::string lhs;
  std::string rhs;
};

struct OracleReport {
  std::vector<OracleCheck> checks;

  bool ok() const;
  std::optional<int> first_mismatch() const;
  void append(const OracleReport& other);
  /// Throws MismatchAt for the first failing check.
  void require() const;
};

/// Exact product F_N ... F_1 (k2) or F_N ... F_0 (k1). The normalized variant
/// needs every 1+|w|^2 to be a rational square.
MatrixLoop<Exact> expand_product_exact(const ExactPoint& point, bool normalized = false,
                                       std::optional<IndexRange> out = std::nullopt);

/// Exact Taylor coefficients 0..degree of num/den (den(0) != 0), both taken
/// from a product expansion.
std::vector<Exact> exact_taylor_quotient(const LaurentSeries<Exact>& num, const LaurentSeries<Exact>& den, int degree);

/// delta_2 coefficient with the constraint j_s < i_s removed (negative control).
Exact delta2_coeff_mutated(std::span<const Exact> zeta, int n);

/// Lemma: entries (2,1), (2,2) of the unnormalized k2 product against the
/// multi-index sums, and entries (1,1), (1,2) against their stars.
OracleReport verify_lemma_coeffs(const ExactPoint& point, int n_max);

/// Theorem: Taylor quotient of the product against xi_enum / psi_enum, plus
/// invariance of the leading-term remainder under a change of the top variable.
OracleReport verify_ratio_coeffs(const ExactPoint& point, int n_max);

/// Word w = (w_0, w_1, ...) stands for (-conj zeta_w0) zeta_w1 (-conj zeta_w2) ...
using SignedWords = std::map<std::vector<int>, long>;

/// Net signed words of gamma (1 - delta + delta^2 - ...) at order n over
/// zeta_1..zeta_count, at most s_max delta factors (default n - 1).
SignedWords cancellation_survivors(int count, int n, int s_max = -1);

/// The chains summed by xi_enum at order n, with sign (-1)^r.
SignedWords xi_chain_words(int count, int n);

/// Expands gamma (1 - delta + delta^2 - ...) at order n word by word and checks
/// that the surviving words are exactly the chains summed by xi_enum.
OracleReport verify_cancellation(const ExactPoint& point, int n, int s_max = -1);

/// The explicit low-order coefficients xi_1..xi_4 and psi_0, psi_1 in closed form.
OracleReport verify_displayed_coeffs(std::span<const Exact> zeta, std::span<const Exact> eta);

/// Closed forms of the low-order ratio coefficients.
Exact displayed_xi(std::span<const Exact> zeta, int n);
Exact displayed_psi(std::span<const Exact> eta, int n);

/// Built-in test points.
std::vector<ExactPoint> stock_points();

/// Runs every check appropriate to the point.
OracleReport verify_point(const ExactPoint& point);

}  // namespace loopfact
