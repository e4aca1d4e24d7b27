#pragma once

// Root-subgroup coordinates, the finite products k1(eta), k2(zeta), the
// multi-index enumerations of their Taylor coefficients, and the special
// triangular data of each product.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "loopfact/loops.hpp"

namespace loopfact {

/// (eta, chi, zeta) with eta indexed from 0 and zeta, chi_plus from 1
/// (zeta[0] holds zeta_1). chi_{-j} = -conj(chi_j) is implied.
template <Coefficient T>
struct BasicCoordinates {
  std::vector<T> eta;
  std::vector<T> zeta;
  double chi0_im = 0.0;
  std::vector<T> chi_plus;

  /// Common truncation degree N.
  int degree() const {
    const int n = std::max({static_cast<int>(eta.size()) - 1, static_cast<int>(zeta.size()),
                            static_cast<int>(chi_plus.size())});
    return std::max(n, 0);
  }
};

using RootSubgroupCoordinates = BasicCoordinates<Complex>;

enum class Side { k1, k2 };

/// a (a_1 or a_2), the off-diagonal corner (y* or x*) and [[alpha, beta], [gamma, delta]].
template <Coefficient T>
struct FactorTriangularData {
  typename ScalarTraits<T>::Real a;
  LaurentSeries<T> corner;
  MatrixLoop<T> unitary_part;
};

/// prod_n (1+|w_n|^2)^(-1/2). Exact mode throws IrrationalNormalizer when a factor
/// is not rational.
template <Coefficient T>
typename ScalarTraits<T>::Real product_normalizer(std::span<const T> w);

/// F_N ... F_1 with F_n = [[1, zeta_n z^-n], [-conj(zeta_n) z^n, 1]].
template <Coefficient T>
MatrixLoop<T> k2_product(std::span<const T> zeta, bool normalized, std::optional<IndexRange> out = std::nullopt);

/// F_N ... F_0 with F_n = [[1, -conj(eta_n) z^n], [eta_n z^-n, 1]].
template <Coefficient T>
MatrixLoop<T> k1_product(std::span<const T> eta, bool normalized, std::optional<IndexRange> out = std::nullopt);

/// (a1, a2) = (prod (1+|eta_n|^2)^(-1/2), prod (1+|zeta_n|^2)^(1/2)).
template <Coefficient T>
std::pair<typename ScalarTraits<T>::Real, typename ScalarTraits<T>::Real> norm_constants(
    const BasicCoordinates<T>& coords);

/// Coefficient of z^n in entry (2,1) of the unnormalized k2 product:
/// sum over 0 < i1 < j1 < ... < jr < i(r+1) of (-conj z_i1) z_j1 ... (-conj z_i(r+1)).
template <Coefficient T>
T gamma2_coeff(std::span<const T> zeta, int n);

/// Coefficient of z^n in entry (2,2): sum over 0 < j1 < i1 < ... < ir of z_j1 (-conj z_i1) ...
template <Coefficient T>
T delta2_coeff(std::span<const T> zeta, int n);

/// Taylor coefficient n of gamma2/delta2 as a signed sum over index chains
/// i0; (j1, i1) ... (jr, ir) with j_s < i_s, j_s <= i_(s-1), sum i - sum j = n.
template <Coefficient T>
T xi_enum(std::span<const T> zeta, int n);

/// Same chains for the k1 ratio K12/K11, with indices starting at 0.
template <Coefficient T>
T psi_enum(std::span<const T> eta, int n);

/// Splits a normalized k1 or k2 product into its special triangular form.
template <Coefficient T>
FactorTriangularData<T> extract_factor_data(const MatrixLoop<T>& k, Side side);

/// |t| for a scalar whose modulus must be a field element.
template <Coefficient T>
typename ScalarTraits<T>::Real modulus(const T& t);

}  // namespace loopfact
