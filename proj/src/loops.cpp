#include "loopfact/loops.hpp"

namespace loopfact {

std::vector<Mat2<Complex>> ml_sample(const MatrixLoop<Complex>& a, int grid) {
  std::vector<Mat2<Complex>> out(static_cast<std::size_t>(grid));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto v = ls_sample(a.at(i, j), grid);
      for (std::size_t k = 0; k < v.size(); ++k) out[k][i][j] = v[k];
    }
  }
  return out;
}

double ml_unitary_defect(const MatrixLoop<Complex>& a, int grid) {
  double worst = 0.0;
  for (const auto& m : ml_sample(a, grid)) {
    // H = m m^* - I is Hermitian: [[p, q], [conj q, r]].
    const double p = std::norm(m[0][0]) + std::norm(m[0][1]) - 1.0;
    const double r = std::norm(m[1][0]) + std::norm(m[1][1]) - 1.0;
    const Complex q = m[0][0] * std::conj(m[1][0]) + m[0][1] * std::conj(m[1][1]);
    const double mid = 0.5 * (p + r);
    const double rad = std::hypot(0.5 * (p - r), std::abs(q));
    worst = std::max(worst, std::max(std::abs(mid + rad), std::abs(mid - rad)));
  }
  return worst;
}

}  // namespace loopfact
