#include "loopfact/rootsub.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace loopfact {

template <Coefficient T>
typename ScalarTraits<T>::Real modulus(const T& t) {
  auto r = ScalarTraits<T>::sqrt(ScalarTraits<T>::norm(t));
  if (!r) throw IrrationalNormalizer();
  return *r;
}

template <Coefficient T>
typename ScalarTraits<T>::Real product_normalizer(std::span<const T> w) {
  using Real = typename ScalarTraits<T>::Real;
  Real p(1);
  for (const T& x : w) {
    auto s = ScalarTraits<T>::sqrt(Real(1) + ScalarTraits<T>::norm(x));
    if (!s) throw IrrationalNormalizer();
    p = p / *s;
  }
  return p;
}

template <Coefficient T>
MatrixLoop<T> k2_product(std::span<const T> zeta, bool normalized, std::optional<IndexRange> out) {
  using S = LaurentSeries<T>;
  MatrixLoop<T> k;
  for (std::size_t idx = 0; idx < zeta.size(); ++idx) {
    const int n = static_cast<int>(idx) + 1;
    const T& z = zeta[idx];
    if (is_exact_zero(z)) continue;
    const MatrixLoop<T> f(S::constant(T(1)), S::monomial(z, -n), S::monomial(-conj(z), n), S::constant(T(1)));
    k = ml_mul(f, k, out);
  }
  if (normalized) k = ml_scale(k, ScalarTraits<T>::from_real(product_normalizer(zeta)));
  return k;
}

template <Coefficient T>
MatrixLoop<T> k1_product(std::span<const T> eta, bool normalized, std::optional<IndexRange> out) {
  using S = LaurentSeries<T>;
  MatrixLoop<T> k;
  for (std::size_t idx = 0; idx < eta.size(); ++idx) {
    const int n = static_cast<int>(idx);
    const T& e = eta[idx];
    if (is_exact_zero(e)) continue;
    const MatrixLoop<T> f(S::constant(T(1)), S::monomial(-conj(e), n), S::monomial(e, -n), S::constant(T(1)));
    k = ml_mul(f, k, out);
  }
  if (normalized) k = ml_scale(k, ScalarTraits<T>::from_real(product_normalizer(eta)));
  return k;
}

template <Coefficient T>
std::pair<typename ScalarTraits<T>::Real, typename ScalarTraits<T>::Real> norm_constants(
    const BasicCoordinates<T>& coords) {
  using Real = typename ScalarTraits<T>::Real;
  const Real a1 = product_normalizer<T>(coords.eta);
  const Real a2 = Real(1) / product_normalizer<T>(coords.zeta);
  return {a1, a2};
}

namespace {

// Sum over strictly increasing index sets {e1 < e2 < ...} of the given parity,
// alternately read as i (-conj zeta) and j (zeta) starting with `first_is_i`.
template <Coefficient T>
T alternating_subset_sum(std::span<const T> zeta, int n, bool first_is_i) {
  const int count = static_cast<int>(zeta.size());
  if (count > 24) throw std::invalid_argument("too many variables for subset enumeration");
  T total(0);
  if (!first_is_i && n == 0) total += T(1);
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << count); ++mask) {
    const int size = std::popcount(mask);
    if ((size % 2 == 1) != first_is_i) continue;
    int weight = 0;
    int pos = 0;
    for (int k = 0; k < count; ++k) {
      if ((mask >> k & 1U) == 0) continue;
      const bool is_i = (pos % 2 == 0) == first_is_i;
      weight += is_i ? k + 1 : -(k + 1);
      ++pos;
    }
    if (weight != n) continue;
    T term(1);
    pos = 0;
    for (int k = 0; k < count && !is_exact_zero(term); ++k) {
      if ((mask >> k & 1U) == 0) continue;
      const bool is_i = (pos % 2 == 0) == first_is_i;
      term = term * (is_i ? -conj(zeta[static_cast<std::size_t>(k)]) : zeta[static_cast<std::size_t>(k)]);
      ++pos;
    }
    total += term;
  }
  return total;
}

// Chains i0; (j1, i1), ..., (jr, ir) for the ratio coefficients. Index k maps
// to w[k - base].
template <Coefficient T>
class ChainSum {
 public:
  ChainSum(std::span<const T> w, int base, int n) : w_(w), base_(base), cap_(std::min<int>(n, base + static_cast<int>(w.size()) - 1)) {}

  T run(int n) {
    T total(0);
    for (int i0 = base_; i0 <= std::min(cap_, n); ++i0) {
      const T v = value(i0);
      if (is_exact_zero(v)) continue;
      extend(i0, n - i0, -conj(v), total);
    }
    return total;
  }

 private:
  T value(int k) const { return w_[static_cast<std::size_t>(k - base_)]; }

  void extend(int prev_i, int remaining, const T& acc, T& total) const {
    if (remaining == 0) {
      total += acc;
      return;
    }
    for (int j = base_; j <= prev_i; ++j) {
      const T zj = value(j);
      if (is_exact_zero(zj)) continue;
      for (int i = j + 1; i <= std::min(cap_, j + remaining); ++i) {
        const T zi = value(i);
        if (is_exact_zero(zi)) continue;
        extend(i, remaining - (i - j), -(acc * zj * -conj(zi)), total);
      }
    }
  }

  std::span<const T> w_;
  int base_;
  int cap_;
};

}  // namespace

template <Coefficient T>
T gamma2_coeff(std::span<const T> zeta, int n) {
  return alternating_subset_sum(zeta, n, true);
}

template <Coefficient T>
T delta2_coeff(std::span<const T> zeta, int n) {
  return alternating_subset_sum(zeta, n, false);
}

template <Coefficient T>
T xi_enum(std::span<const T> zeta, int n) {
  if (n < 1 || zeta.empty()) return T(0);
  return ChainSum<T>(zeta, 1, n).run(n);
}

template <Coefficient T>
T psi_enum(std::span<const T> eta, int n) {
  if (n < 0 || eta.empty()) return T(0);
  return ChainSum<T>(eta, 0, n).run(n);
}

template <Coefficient T>
FactorTriangularData<T> extract_factor_data(const MatrixLoop<T>& k, Side side) {
  using Real = typename ScalarTraits<T>::Real;
  using S = LaurentSeries<T>;
  const IndexRange w = k.window();
  const int degree = std::max(std::abs(w.lo), std::abs(w.hi)) + 1;

  if (side == Side::k2) {
    const T k22_0 = k.at(1, 1).coeff(0);
    if (is_exact_zero(k22_0)) throw NonInvertibleCorner();
    const Real a = Real(1) / modulus(k22_0);
    const T at = ScalarTraits<T>::from_real(a);
    const T inv_a = ScalarTraits<T>::from_real(Real(1) / a);
    const S x_star = ls_project(ls_mul(k.at(0, 1), ls_invert(k.at(1, 1), Orientation::z, degree)), Part::strict_negative);
    const S alpha = ls_project(ls_scale(k.at(0, 0) - ls_mul(x_star, k.at(1, 0)), inv_a), Part::nonnegative);
    const S beta = ls_project(ls_scale(k.at(0, 1) - ls_mul(x_star, k.at(1, 1)), inv_a), Part::nonnegative);
    return {a, x_star, MatrixLoop<T>(alpha, beta, ls_scale(k.at(1, 0), at), ls_scale(k.at(1, 1), at))};
  }

  const T k11_0 = k.at(0, 0).coeff(0);
  if (is_exact_zero(k11_0)) throw NonInvertibleCorner();
  const Real a = modulus(k11_0);
  const T at = ScalarTraits<T>::from_real(a);
  const T inv_a = ScalarTraits<T>::from_real(Real(1) / a);
  const S y_star = ls_project(ls_mul(k.at(1, 0), ls_invert(k.at(0, 0), Orientation::z, degree)), Part::nonpositive);
  const S gamma = ls_project(ls_scale(k.at(1, 0) - ls_mul(y_star, k.at(0, 0)), at), Part::nonnegative);
  const S delta = ls_project(ls_scale(k.at(1, 1) - ls_mul(y_star, k.at(0, 1)), at), Part::nonnegative);
  return {a, y_star, MatrixLoop<T>(ls_scale(k.at(0, 0), inv_a), ls_scale(k.at(0, 1), inv_a), gamma, delta)};
}

#define LOOPFACT_INSTANTIATE(T)                                                                                  \
  template ScalarTraits<T>::Real modulus<T>(const T&);                                                          \
  template ScalarTraits<T>::Real product_normalizer<T>(std::span<const T>);                                     \
  template MatrixLoop<T> k2_product<T>(std::span<const T>, bool, std::optional<IndexRange>);                    \
  template MatrixLoop<T> k1_product<T>(std::span<const T>, bool, std::optional<IndexRange>);                    \
  template std::pair<ScalarTraits<T>::Real, ScalarTraits<T>::Real> norm_constants<T>(const BasicCoordinates<T>&); \
  template T gamma2_coeff<T>(std::span<const T>, int);                                                          \
  template T delta2_coeff<T>(std::span<const T>, int);                                                          \
  template T xi_enum<T>(std::span<const T>, int);                                                               \
  template T psi_enum<T>(std::span<const T>, int);                                                              \
  template FactorTriangularData<T> extract_factor_data<T>(const MatrixLoop<T>&, Side);

LOOPFACT_INSTANTIATE(Complex)
LOOPFACT_INSTANTIATE(GaussianRational)

}  // namespace loopfact
