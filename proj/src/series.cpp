#include "loopfact/series.hpp"

#include <numbers>

namespace loopfact {

namespace {

Complex root_of_unity(long long k, int grid) {
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(k % grid) / grid;
  return std::polar(1.0, theta);
}

}  // namespace

std::vector<Complex> ls_sample(const LaurentSeries<Complex>& a, int grid) {
  if (grid < 1) throw GridTooSmall(grid, 1);
  std::vector<Complex> out(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) {
    Complex v = 0.0;
    for (int n = a.lo(); n <= a.hi(); ++n) {
      const long long e = ((static_cast<long long>(k) * n) % grid + grid) % grid;
      v += a.coeff(n) * root_of_unity(e, grid);
    }
    out[static_cast<std::size_t>(k)] = v;
  }
  return out;
}

LaurentSeries<Complex> ls_from_samples(std::span<const Complex> samples, IndexRange window) {
  const int grid = static_cast<int>(samples.size());
  if (window.empty()) throw std::invalid_argument("window must be nonempty");
  if (grid < window.size()) throw GridTooSmall(grid, window.size());
  std::vector<Complex> c(static_cast<std::size_t>(window.size()));
  for (int n = window.lo; n <= window.hi; ++n) {
    Complex s = 0.0;
    for (int k = 0; k < grid; ++k) {
      const long long e = ((-static_cast<long long>(k) * n) % grid + grid) % grid;
      s += samples[static_cast<std::size_t>(k)] * root_of_unity(e, grid);
    }
    c[static_cast<std::size_t>(n - window.lo)] = s / static_cast<double>(grid);
  }
  return {window.lo, std::move(c)};
}

}  // namespace loopfact
