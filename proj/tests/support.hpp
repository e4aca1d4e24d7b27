#pragma once

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "loopfact/json_io.hpp"

namespace support {

inline std::string fixture(const std::string& name) { return std::string(LOOPFACT_FIXTURES) + "/" + name; }

inline loopfact::Exact q(const char* re, const char* im = "0") { return loopfact::Exact::parse(re, im); }

inline std::vector<loopfact::ExactPoint> fixture_points(const std::string& name) {
  return loopfact::points_from_json(loopfact::read_json_file(fixture(name)));
}

inline const loopfact::ExactPoint& point_named(const std::vector<loopfact::ExactPoint>& points, const std::string& name) {
  for (const auto& p : points) {
    if (p.name == name) return p;
  }
  FAIL("no fixture point " << name);
  return points.front();
}

// |eta_n| <= rho^(n+1), |zeta_n| <= rho^n, |chi_n| <= rho^n / n
inline loopfact::RootSubgroupCoordinates random_coords(std::uint64_t seed, int n, double rho = 0.6,
                                                       bool with_eta = true, bool with_chi = true) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&](double bound) { return std::polar(bound * u(gen), 2.0 * std::numbers::pi * u(gen)); };
  loopfact::RootSubgroupCoordinates c;
  for (int k = 0; k <= n; ++k) c.eta.push_back(with_eta ? draw(std::pow(rho, k + 1)) : 0.0);
  for (int k = 1; k <= n; ++k) c.zeta.push_back(draw(std::pow(rho, k)));
  for (int k = 1; k <= n; ++k) c.chi_plus.push_back(with_chi ? draw(std::pow(rho, k) / k) : 0.0);
  c.chi0_im = with_chi ? rho * std::numbers::pi * (2.0 * u(gen) - 1.0) : 0.0;
  return c;
}

}  // namespace support
