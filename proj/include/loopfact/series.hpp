#pragma once

// Truncated Laurent series over an abstract coefficient field.
//
// A series stores coefficients on a finite window [lo, hi]. Beside the window
// it carries a *reach* [reach_lo, reach_hi]: the indices whose stored value is
// the true coefficient. An unbounded reach on one side means the series is
// closed on that side, i.e. every true coefficient beyond the window is zero
// (or negligible in inexact mode). A bounded reach marks a truncated tail; the
// coefficients past it are unknown. Every operation propagates the reach
// conservatively, so truncation never silently corrupts a coefficient that is
// reported as reliable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "loopfact/errors.hpp"
#include "loopfact/scalar.hpp"

namespace loopfact {

/// Threshold below which a constant term counts as zero in inexact mode.
inline constexpr double kDefaultZeroEpsilon = 1e-12;
/// Relative size below which an inexact coefficient at a closed edge, or a
/// decayed tail, is treated as zero.
inline constexpr double kNegligible = 1e-14;

struct IndexRange {
  int lo = 0;
  int hi = -1;

  bool empty() const { return lo > hi; }
  bool contains(int n) const { return lo <= n && n <= hi; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

inline IndexRange intersect(IndexRange a, IndexRange b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

/// Index sets selected by ls_project. (.)_- is strict_negative and (.)_+ is
/// nonnegative throughout the library.
enum class Part { strict_negative, nonpositive, constant, nonnegative, strict_positive };

enum class Orientation { z, z_inverse };

namespace detail {

inline constexpr std::int64_t kUnbounded = std::int64_t{1} << 40;

// Saturating sum where at most one operand is unbounded.
inline std::int64_t reach_add(std::int64_t a, std::int64_t b) {
  if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
  if (a <= -kUnbounded || b <= -kUnbounded) return -kUnbounded;
  return a + b;
}

}  // namespace detail

template <Coefficient T>
class LaurentSeries {
 public:
  using Traits = ScalarTraits<T>;
  using Real = typename Traits::Real;

  LaurentSeries() : coeffs_{T(0)} {}

  /// Exact Laurent polynomial sum_k coeffs[k] z^(lo+k).
  LaurentSeries(int lo, std::vector<T> coeffs) : lo_(lo), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(T(0));
  }

  LaurentSeries(int lo, std::vector<T> coeffs, std::int64_t reach_lo, std::int64_t reach_hi)
      : LaurentSeries(lo, std::move(coeffs)) {
    reach_lo_ = reach_lo <= -detail::kUnbounded ? -detail::kUnbounded : std::max<std::int64_t>(reach_lo, lo_);
    reach_hi_ = reach_hi >= detail::kUnbounded ? detail::kUnbounded : std::min<std::int64_t>(reach_hi, hi());
  }

  static LaurentSeries constant(const T& c) { return {0, {c}}; }
  static LaurentSeries monomial(const T& c, int power) { return {power, {c}}; }

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
  IndexRange window() const { return {lo(), hi()}; }

  /// Reliable sub-window, clamped to the stored window (may be empty).
  IndexRange reliable() const {
    return {static_cast<int>(std::max<std::int64_t>(reach_lo_, lo_)),
            static_cast<int>(std::min<std::int64_t>(reach_hi_, hi()))};
  }
  std::int64_t reach_lo() const { return reach_lo_; }
  std::int64_t reach_hi() const { return reach_hi_; }
  bool closed_below() const { return reach_lo_ <= -detail::kUnbounded; }
  bool closed_above() const { return reach_hi_ >= detail::kUnbounded; }
  bool is_polynomial() const { return closed_below() && closed_above(); }

  T coeff(int n) const {
    if (n < lo_ || n > hi()) return T(0);
    return coeffs_[static_cast<std::size_t>(n - lo_)];
  }
  std::span<const T> coeffs() const { return coeffs_; }

  /// Largest coefficient magnitude (at least 1), the scale for negligibility.
  double scale() const {
    double s = 1.0;
    for (const auto& c : coeffs_) s = std::max(s, Traits::magnitude(c));
    return s;
  }

 private:
  int lo_ = 0;
  std::vector<T> coeffs_;
  std::int64_t reach_lo_ = -detail::kUnbounded;
  std::int64_t reach_hi_ = detail::kUnbounded;
};

namespace detail {

template <Coefficient T>
bool negligible(const T& c, double scale) {
  return ScalarTraits<T>::is_zero(c, kNegligible * scale);
}

// Drops negligible coefficients at closed edges; open edges keep their window.
template <Coefficient T>
LaurentSeries<T> settle(int lo, std::vector<T> c, std::int64_t reach_lo, std::int64_t reach_hi) {
  double scale = 1.0;
  for (const auto& x : c) scale = std::max(scale, ScalarTraits<T>::magnitude(x));
  std::size_t first = 0;
  std::size_t last = c.size();
  if (reach_lo <= -kUnbounded) {
    while (first + 1 < last && negligible(c[first], scale)) ++first;
  }
  if (reach_hi >= kUnbounded) {
    while (last > first + 1 && negligible(c[last - 1], scale)) --last;
  }
  const bool closed = reach_lo <= -kUnbounded && reach_hi >= kUnbounded;
  // exact zero: park it at z^0 so it does not widen windows it is added to
  if (closed && last == first + 1 && negligible(c[first], scale)) return {0, {T(0)}, reach_lo, reach_hi};
  if (first == 0 && last == c.size()) return {lo, std::move(c), reach_lo, reach_hi};
  std::vector<T> kept(c.begin() + static_cast<std::ptrdiff_t>(first), c.begin() + static_cast<std::ptrdiff_t>(last));
  return {lo + static_cast<int>(first), std::move(kept), reach_lo, reach_hi};
}

// Restricts a computed coefficient run to `out`, opening any edge that
// discards a non-negligible coefficient.
template <Coefficient T>
LaurentSeries<T> restrict_to(int lo, std::vector<T> c, std::int64_t reach_lo, std::int64_t reach_hi,
                             IndexRange out) {
  if (out.empty()) throw std::invalid_argument("output window must be nonempty");
  const int hi = lo + static_cast<int>(c.size()) - 1;
  double scale = 1.0;
  for (const auto& x : c) scale = std::max(scale, ScalarTraits<T>::magnitude(x));
  IndexRange keep = intersect({lo, hi}, out);
  if (keep.empty()) {
    const int at = hi < out.lo ? out.lo : out.hi;
    keep = {at, at};
  }
  bool lost_below = false;
  bool lost_above = false;
  for (int n = lo; n <= hi; ++n) {
    if (keep.contains(n)) continue;
    if (!negligible(c[static_cast<std::size_t>(n - lo)], scale)) (n < keep.lo ? lost_below : lost_above) = true;
  }
  std::vector<T> kept;
  kept.reserve(static_cast<std::size_t>(keep.size()));
  for (int n = keep.lo; n <= keep.hi; ++n) kept.push_back(n >= lo && n <= hi ? c[static_cast<std::size_t>(n - lo)] : T(0));
  if (lost_below) reach_lo = std::max<std::int64_t>(reach_lo, keep.lo);
  if (lost_above) reach_hi = std::min<std::int64_t>(reach_hi, keep.hi);
  return settle(keep.lo, std::move(kept), reach_lo, reach_hi);
}

template <Coefficient T>
void require_power_series(const LaurentSeries<T>& a) {
  const double s = a.scale();
  for (int n = a.lo(); n < 0 && n <= a.hi(); ++n) {
    if (!negligible(a.coeff(n), s)) throw InvalidInput("series has terms on the wrong side of the constant");
  }
}

}  // namespace detail

template <Coefficient T>
LaurentSeries<T> ls_add(const LaurentSeries<T>& a, const LaurentSeries<T>& b) {
  const int lo = std::min(a.lo(), b.lo());
  const int hi = std::max(a.hi(), b.hi());
  std::vector<T> c(static_cast<std::size_t>(hi - lo + 1), T(0));
  for (int n = lo; n <= hi; ++n) c[static_cast<std::size_t>(n - lo)] = a.coeff(n) + b.coeff(n);
  return detail::settle(lo, std::move(c), std::max(a.reach_lo(), b.reach_lo()),
                        std::min(a.reach_hi(), b.reach_hi()));
}

template <Coefficient T>
LaurentSeries<T> ls_scale(const LaurentSeries<T>& a, const T& s) {
  std::vector<T> c(a.coeffs().begin(), a.coeffs().end());
  for (auto& x : c) x = s * x;
  return detail::settle(a.lo(), std::move(c), a.reach_lo(), a.reach_hi());
}

template <Coefficient T>
LaurentSeries<T> operator+(const LaurentSeries<T>& a, const LaurentSeries<T>& b) {
  return ls_add(a, b);
}
template <Coefficient T>
LaurentSeries<T> operator-(const LaurentSeries<T>& a) {
  return ls_scale(a, T(-1));
}
template <Coefficient T>
LaurentSeries<T> operator-(const LaurentSeries<T>& a, const LaurentSeries<T>& b) {
  return ls_add(a, -b);
}
template <Coefficient T>
LaurentSeries<T> operator*(const T& s, const LaurentSeries<T>& a) {
  return ls_scale(a, s);
}

/// Cauchy product, optionally restricted to `out`.
template <Coefficient T>
LaurentSeries<T> ls_mul(const LaurentSeries<T>& a, const LaurentSeries<T>& b,
                        std::optional<IndexRange> out = std::nullopt) {
  using detail::kUnbounded;
  using detail::reach_add;
  const int lo = a.lo() + b.lo();
  const int hi = a.hi() + b.hi();
  std::vector<T> c(static_cast<std::size_t>(hi - lo + 1), T(0));
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (is_exact_zero(ac[i])) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) {
      if (is_exact_zero(bc[j])) continue;
      c[i + j] += ac[i] * bc[j];
    }
  }

  // Possible support of the true factors: the stored window on closed sides,
  // unbounded on truncated ones.
  const std::int64_t sa_lo = a.closed_below() ? a.lo() : -kUnbounded;
  const std::int64_t sa_hi = a.closed_above() ? a.hi() : kUnbounded;
  const std::int64_t sb_lo = b.closed_below() ? b.lo() : -kUnbounded;
  const std::int64_t sb_hi = b.closed_above() ? b.hi() : kUnbounded;
  std::int64_t rlo = -kUnbounded;
  std::int64_t rhi = kUnbounded;
  if (!a.closed_below()) rlo = std::max(rlo, reach_add(a.reach_lo(), sb_hi));
  if (!b.closed_below()) rlo = std::max(rlo, reach_add(b.reach_lo(), sa_hi));
  if (!a.closed_above()) rhi = std::min(rhi, reach_add(a.reach_hi(), sb_lo));
  if (!b.closed_above()) rhi = std::min(rhi, reach_add(b.reach_hi(), sa_lo));

  if (out) return detail::restrict_to(lo, std::move(c), rlo, rhi, *out);
  return detail::settle(lo, std::move(c), rlo, rhi);
}

/// Restriction to a window; edges that cut off non-negligible terms become
/// truncated tails.
template <Coefficient T>
LaurentSeries<T> ls_truncate(const LaurentSeries<T>& a, IndexRange out) {
  return detail::restrict_to(a.lo(), std::vector<T>(a.coeffs().begin(), a.coeffs().end()), a.reach_lo(),
                             a.reach_hi(), out);
}

/// f*(z) = conj(f(1/conj z)): coefficient c_n moves to index -n, conjugated.
template <Coefficient T>
LaurentSeries<T> ls_star(const LaurentSeries<T>& a) {
  const auto ac = a.coeffs();
  std::vector<T> c(ac.size(), T(0));
  for (std::size_t k = 0; k < ac.size(); ++k) c[ac.size() - 1 - k] = conj(ac[k]);
  return {-a.hi(), std::move(c), -a.reach_hi(), -a.reach_lo()};
}

/// z -> 1/z without conjugation.
template <Coefficient T>
LaurentSeries<T> ls_reflect(const LaurentSeries<T>& a) {
  std::vector<T> c(a.coeffs().rbegin(), a.coeffs().rend());
  return {-a.hi(), std::move(c), -a.reach_hi(), -a.reach_lo()};
}

template <Coefficient T>
LaurentSeries<T> ls_project(const LaurentSeries<T>& a, Part part) {
  using detail::kUnbounded;
  std::int64_t p_lo = -kUnbounded;
  std::int64_t p_hi = kUnbounded;
  switch (part) {
    case Part::strict_negative: p_hi = -1; break;
    case Part::nonpositive: p_hi = 0; break;
    case Part::constant: p_lo = 0; p_hi = 0; break;
    case Part::nonnegative: p_lo = 0; break;
    case Part::strict_positive: p_lo = 1; break;
  }
  // Outside the selected set the projection is exactly zero.
  std::int64_t rlo = a.reach_lo();
  std::int64_t rhi = a.reach_hi();
  if (p_lo > -kUnbounded && rlo <= p_lo) rlo = -kUnbounded;
  if (p_hi < kUnbounded && rhi >= p_hi) rhi = kUnbounded;

  IndexRange keep{static_cast<int>(std::max<std::int64_t>(a.lo(), p_lo)),
                  static_cast<int>(std::min<std::int64_t>(a.hi(), p_hi))};
  if (keep.empty()) {
    const int at = static_cast<int>(p_lo > -kUnbounded ? p_lo : p_hi);
    return {at, {T(0)}, rlo, rhi};
  }
  std::vector<T> c;
  for (int n = keep.lo; n <= keep.hi; ++n) c.push_back(a.coeff(n));
  return detail::settle(keep.lo, std::move(c), rlo, rhi);
}

/// Multiplicative inverse of a power series in z (or in 1/z), to `degree`.
template <Coefficient T>
LaurentSeries<T> ls_invert(const LaurentSeries<T>& a, Orientation orientation, int degree,
                           double zero_eps = kDefaultZeroEpsilon) {
  if (orientation == Orientation::z_inverse) {
    return ls_reflect(ls_invert(ls_reflect(a), Orientation::z, degree, zero_eps));
  }
  if (degree < 0) throw std::invalid_argument("degree must be nonnegative");
  detail::require_power_series(a);
  const T c0 = a.coeff(0);
  if (ScalarTraits<T>::is_zero(c0, zero_eps)) throw ZeroConstantTerm();

  const T inv0 = T(1) / c0;
  const int top = a.hi();
  std::vector<T> b(static_cast<std::size_t>(degree + 1), T(0));
  b[0] = inv0;
  for (int n = 1; n <= degree; ++n) {
    T s(0);
    for (int k = 1; k <= std::min(n, top); ++k) {
      const T ak = a.coeff(k);
      if (!is_exact_zero(ak)) s += ak * b[static_cast<std::size_t>(n - k)];
    }
    b[static_cast<std::size_t>(n)] = -(s * inv0);
  }

  std::int64_t rhi = a.closed_above() ? degree : std::min<std::int64_t>(degree, a.reach_hi());
  if (a.closed_above()) {
    // The coefficients obey a linear recurrence of order `top`: once `top`
    // consecutive values vanish, all later ones do too.
    const int order = std::max(top, 0);
    const double s = std::max(1.0, ScalarTraits<T>::magnitude(inv0));
    bool decayed = order == 0 || degree + 1 >= order;
    for (int n = degree; decayed && n > degree - order && n >= 0; --n) {
      decayed = detail::negligible(b[static_cast<std::size_t>(n)], s);
    }
    if (decayed && (order == 0 || degree >= order)) rhi = detail::kUnbounded;
  }
  return detail::settle(0, std::move(b), -detail::kUnbounded, rhi);
}

namespace detail {

// Degree D <= max_degree past which the true coefficients of exp(sum_j a_j z^j)
// have total mass below kNegligible. The coefficients are dominated by those
// of exp(sum_j |a_j| z^j), summed up to max_degree; beyond that the Cauchy
// estimate |c_k| <= exp(P(r)) r^-k with P(r) = sum_j |a_j| r^j bounds the rest.
template <Coefficient T>
std::optional<int> exp_closure_degree(const LaurentSeries<T>& a, int max_degree) {
  static constexpr double kRadii[] = {1.1, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0};
  const int top = std::max(a.hi(), 0);
  std::vector<double> mag(static_cast<std::size_t>(top + 1), 0.0);
  for (int j = 1; j <= top; ++j) mag[static_cast<std::size_t>(j)] = ScalarTraits<T>::magnitude(a.coeff(j));
  if (std::all_of(mag.begin(), mag.end(), [](double x) { return x == 0.0; })) return 0;

  double far_tail = std::numeric_limits<double>::infinity();
  for (double r : kRadii) {
    double p = 0.0;
    for (int j = 1; j <= top; ++j) p += mag[static_cast<std::size_t>(j)] * std::pow(r, j);
    const double log_bound = p - (max_degree + 1) * std::log(r) - std::log(1.0 - 1.0 / r);
    far_tail = std::min(far_tail, std::exp(log_bound));
  }
  const double budget = 0.5 * kNegligible;
  if (!(far_tail <= budget)) return std::nullopt;

  std::vector<double> m(static_cast<std::size_t>(max_degree + 1), 0.0);
  m[0] = 1.0;
  for (int n = 1; n <= max_degree; ++n) {
    double s = 0.0;
    for (int k = 1; k <= std::min(n, top); ++k) s += k * mag[static_cast<std::size_t>(k)] * m[static_cast<std::size_t>(n - k)];
    m[static_cast<std::size_t>(n)] = s / n;
  }
  double tail = 0.0;
  int d = max_degree;
  while (d > 0 && tail + m[static_cast<std::size_t>(d)] <= budget) tail += m[static_cast<std::size_t>(d--)];
  return d;
}

}  // namespace detail

/// Exponential of a pure power series in z (or 1/z) with zero constant term.
template <Coefficient T>
LaurentSeries<T> ls_exp(const LaurentSeries<T>& a, Orientation orientation, int degree,
                        double zero_eps = kDefaultZeroEpsilon) {
  if (orientation == Orientation::z_inverse) {
    return ls_reflect(ls_exp(ls_reflect(a), Orientation::z, degree, zero_eps));
  }
  if (degree < 0) throw std::invalid_argument("degree must be nonnegative");
  detail::require_power_series(a);
  if (!ScalarTraits<T>::is_zero(a.coeff(0), zero_eps)) throw NonzeroConstant();

  int used = degree;
  bool closed = false;
  if constexpr (!ScalarTraits<T>::exact) {
    if (a.closed_above()) {
      if (auto d = detail::exp_closure_degree(a, degree)) {
        used = *d;
        closed = true;
      }
    }
  } else {
    closed = a.closed_above() && a.hi() <= 0;  // exp(0) = 1
  }

  // n E_n = sum_{k=1..n} k a_k E_{n-k}
  std::vector<T> e(static_cast<std::size_t>(used + 1), T(0));
  e[0] = T(1);
  for (int n = 1; n <= used; ++n) {
    T s(0);
    for (int k = 1; k <= std::min(n, a.hi()); ++k) {
      const T ak = a.coeff(k);
      if (!is_exact_zero(ak)) s += T(k) * ak * e[static_cast<std::size_t>(n - k)];
    }
    e[static_cast<std::size_t>(n)] = s / T(n);
  }
  std::int64_t rhi = a.closed_above() ? used : std::min<std::int64_t>(used, a.reach_hi());
  if (closed) rhi = detail::kUnbounded;
  return detail::settle(0, std::move(e), -detail::kUnbounded, rhi);
}

/// Values at the `grid` equally spaced points exp(2 pi i k / grid) of the unit circle.
std::vector<Complex> ls_sample(const LaurentSeries<Complex>& a, int grid);

/// Discrete Fourier inversion of circle samples restricted to `window`.
LaurentSeries<Complex> ls_from_samples(std::span<const Complex> samples, IndexRange window);

/// Largest coefficient difference over `on` (the reliable windows' overlap by default).
template <Coefficient T>
double max_abs_diff(const LaurentSeries<T>& a, const LaurentSeries<T>& b, std::optional<IndexRange> on = std::nullopt) {
  const IndexRange r = on ? *on : intersect(a.reliable(), b.reliable());
  double d = 0.0;
  for (int n = r.lo; n <= r.hi; ++n) d = std::max(d, ScalarTraits<T>::magnitude(a.coeff(n) - b.coeff(n)));
  return d;
}

/// Coefficientwise equality over the union of windows.
template <Coefficient T>
bool same_coefficients(const LaurentSeries<T>& a, const LaurentSeries<T>& b) {
  for (int n = std::min(a.lo(), b.lo()); n <= std::max(a.hi(), b.hi()); ++n) {
    if (!(a.coeff(n) == b.coeff(n))) return false;
  }
  return true;
}

}  // namespace loopfact
