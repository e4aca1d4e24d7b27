#pragma once

// Coefficient fields for series arithmetic: inexact std::complex<double> and
// exact Gaussian rationals (complex numbers with rational real/imaginary parts).

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <concepts>
#include <optional>
#include <string>

namespace loopfact {

using Complex = std::complex<double>;

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(mpq_class re, mpq_class im = 0);  // NOLINT(google-explicit-constructor)
  GaussianRational(long re) : re_(re), im_(0) {}     // NOLINT(google-explicit-constructor)
  GaussianRational(int re) : re_(re), im_(0) {}      // NOLINT(google-explicit-constructor)

  /// Parses "p/q" (or "p") strings for each part.
  static GaussianRational parse(const std::string& re, const std::string& im);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  GaussianRational conj() const { return {re_, -im_}; }
  /// |z|^2, exact.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// "a/b + c/d i" style text for diagnostics.
  std::string to_string() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Exact square root of a nonnegative rational, if it is a perfect square.
std::optional<mpq_class> rational_sqrt(const mpq_class& q);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  using Real = double;
  static constexpr bool exact = false;

  static Complex conj(const Complex& c) { return std::conj(c); }
  static double norm(const Complex& c) { return std::norm(c); }
  static double magnitude(const Complex& c) { return std::abs(c); }
  static bool is_zero(const Complex& c, double eps) { return std::abs(c) <= eps; }
  static Complex from_real(double r) { return {r, 0.0}; }
  static std::optional<double> sqrt(double r) { return std::sqrt(r); }
  static double to_double(double r) { return r; }
};

template <>
struct ScalarTraits<GaussianRational> {
  using Real = mpq_class;
  static constexpr bool exact = true;

  static GaussianRational conj(const GaussianRational& c) { return c.conj(); }
  static mpq_class norm(const GaussianRational& c) { return c.norm(); }
  static double magnitude(const GaussianRational& c) { return std::abs(c.to_complex()); }
  // Exact mode ignores tolerances: only true zero is zero.
  static bool is_zero(const GaussianRational& c, double /*eps*/) { return c.is_zero(); }
  static GaussianRational from_real(const mpq_class& r) { return {r, 0}; }
  static std::optional<mpq_class> sqrt(const mpq_class& r) { return rational_sqrt(r); }
  static double to_double(const mpq_class& r) { return r.get_d(); }
};

template <class T>
concept Coefficient = requires(T a, T b) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { -a } -> std::convertible_to<T>;
  typename ScalarTraits<T>::Real;
};

template <Coefficient T>
T conj(const T& c) {
  return ScalarTraits<T>::conj(c);
}

template <Coefficient T>
bool is_exact_zero(const T& c) {
  return ScalarTraits<T>::is_zero(c, 0.0);
}

}  // namespace loopfact
