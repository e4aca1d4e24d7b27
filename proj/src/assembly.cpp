#include "loopfact/assembly.hpp"

#include <stdexcept>

namespace loopfact {

namespace {

template <Coefficient T>
struct ChiExponentials {
  LaurentSeries<T> plus;       // e^{chi_+}
  LaurentSeries<T> minus;      // e^{-chi_+}
  LaurentSeries<T> plus_two;   // e^{2 chi_+}
};

template <Coefficient T>
ChiExponentials<T> chi_exponentials(const BasicCoordinates<T>& coords) {
  const LaurentSeries<T> chi(1, coords.chi_plus);
  if constexpr (ScalarTraits<T>::exact) {
    for (const T& c : coords.chi_plus) {
      if (!is_exact_zero(c)) throw InvalidInput("exact mode requires chi = 0");
    }
  }
  return {ls_exp(chi, Orientation::z, kExpDegreeCap), ls_exp(-chi, Orientation::z, kExpDegreeCap),
          ls_exp(ls_scale(chi, T(2)), Orientation::z, kExpDegreeCap)};
}

template <Coefficient T>
MatrixLoop<T> upper_unipotent(const LaurentSeries<T>& x) {
  return {LaurentSeries<T>::constant(T(1)), x, LaurentSeries<T>(), LaurentSeries<T>::constant(T(1))};
}

template <Coefficient T>
void require_small(const LaurentSeries<T>& residual, const char* what) {
  const double tol = 1e-9;
  for (T c : residual.coeffs()) {
    if (!ScalarTraits<T>::is_zero(c, tol)) throw std::logic_error(std::string("identity failed: ") + what);
  }
}

}  // namespace

template <Coefficient T>
T unit_phase(double t) {
  if constexpr (ScalarTraits<T>::exact) {
    if (t != 0.0) throw InvalidInput("exact mode requires chi0 = 0");
    return T(1);
  } else {
    return std::polar(1.0, t);
  }
}

template <Coefficient T>
MatrixLoop<T> assemble_loop(const BasicCoordinates<T>& coords, std::optional<IndexRange> out) {
  const auto k1 = k1_product<T>(coords.eta, true);
  const auto k2 = k2_product<T>(coords.zeta, true);
  const auto e = chi_exponentials(coords);
  const T m0 = unit_phase<T>(coords.chi0_im);
  // e^{chi_-} = (e^{-chi_+})^*, e^{-chi_-} = (e^{chi_+})^*
  const auto d11 = ls_scale(ls_mul(ls_star(e.minus), e.plus), m0);
  const auto d22 = ls_scale(ls_mul(ls_star(e.plus), e.minus), T(1) / m0);
  const auto middle = MatrixLoop<T>::diagonal(d11, d22);
  return ml_mul(ml_mul(ml_star(k1), middle), k2, out);
}

template <Coefficient T>
BasicTriangular<T> assemble_triangular(const BasicCoordinates<T>& coords, std::optional<IndexRange> out) {
  using Real = typename ScalarTraits<T>::Real;
  using S = LaurentSeries<T>;
  const auto f1 = extract_factor_data(k1_product<T>(coords.eta, true), Side::k1);
  const auto f2 = extract_factor_data(k2_product<T>(coords.zeta, true), Side::k2);
  const auto e = chi_exponentials(coords);
  const T m0 = unit_phase<T>(coords.chi0_im);
  const Real a0 = f1.a * f2.a;

  const S y_upper = ls_scale(ls_star(f1.corner), ScalarTraits<T>::from_real(f1.a * f1.a));   // Y
  const S x_star = ls_scale(f2.corner, ScalarTraits<T>::from_real(Real(1) / (f2.a * f2.a)));  // X*
  const T c = ScalarTraits<T>::from_real(a0) * m0;
  const T c2 = c * c;
  const S p = ls_mul(ls_star(e.plus_two), y_upper);  // e^{-2 chi_-} Y
  const S q = ls_mul(e.plus_two, x_star);            // e^{2 chi_+} X*
  const S lower_part = ls_project(p + ls_scale(q, c2), Part::strict_negative);
  const S upper_part = ls_project(ls_scale(p, T(1) / c2) + q, Part::nonnegative);
  require_small(ls_scale(upper_part, c2) + lower_part - p - ls_scale(q, c2), "middle factor split");

  auto l = ml_mul(ml_mul(ml_star(f1.unitary_part), MatrixLoop<T>::diagonal(ls_star(e.minus), ls_star(e.plus))),
                  upper_unipotent(lower_part), out);
  auto u = ml_mul(ml_mul(upper_unipotent(upper_part), MatrixLoop<T>::diagonal(e.plus, e.minus)), f2.unitary_part, out);
  return {std::move(l), m0, a0, std::move(u), T(1)};
}

template <Coefficient T>
MatrixLoop<T> recompose(const BasicTriangular<T>& t, std::optional<IndexRange> out) {
  const T d = ScalarTraits<T>::from_real(t.a0) * t.m0;
  const auto middle = MatrixLoop<T>::constant({{{d, T(0)}, {T(0), t.det0 / d}}});
  return ml_mul(ml_mul(t.l, middle), t.u, out);
}

#define LOOPFACT_INSTANTIATE(T)                                                                        \
  template T unit_phase<T>(double);                                                                   \
  template MatrixLoop<T> assemble_loop<T>(const BasicCoordinates<T>&, std::optional<IndexRange>);     \
  template BasicTriangular<T> assemble_triangular<T>(const BasicCoordinates<T>&, std::optional<IndexRange>); \
  template MatrixLoop<T> recompose<T>(const BasicTriangular<T>&, std::optional<IndexRange>);

LOOPFACT_INSTANTIATE(Complex)
LOOPFACT_INSTANTIATE(GaussianRational)

}  // namespace loopfact
