#pragma once

// Command-line front end. `run` is the whole program; the pieces below are
// exposed for the tests.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "loopfact/json_io.hpp"

namespace loopfact::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadInput = 2,
  kNotTopStratum = 3,
  kNoTriangular = 4,
  kOracleMismatch = 5,
};

struct RunConfig {
  int degree = 8;
  std::optional<int> toeplitz_size;  // default 2N + 8
  std::optional<int> grid;           // default 8N
  double tol = 1e-8;
  double unitary_tol = 1e-6;
  std::string mode = "float";
  std::uint64_t seed = 42;
  int trials = 100;
  double rho = 0.6;
  std::string chi_law = "log";
  bool zeta_only = false;
  bool timings = false;
  std::string out_dir = ".";
  std::string fixtures;

  int section_size() const { return toeplitz_size.value_or(default_section_size(degree)); }
  int grid_size() const { return grid.value_or(8 * degree); }
  SolveOptions solve_options() const;
  /// Throws InvalidInput.
  void validate() const;
  Json to_json() const;
};

/// Child seed for trial `index`.
std::uint64_t trial_seed(std::uint64_t seed, int index);

/// Coordinates with |eta_n| <= rho^(n+1), |zeta_n| <= rho^n, uniform phases.
/// chi_law "log": |chi_n| <= rho^n / n, "geometric": |chi_n| <= rho^n.
RootSubgroupCoordinates sample_coordinates(std::uint64_t seed, int degree, double rho,
                                           const std::string& chi_law = "log");

/// Max abs difference over eta, zeta, chi_plus, plus the wrapped chi0 difference.
double coordinate_error(const RootSubgroupCoordinates& want, const RootSubgroupCoordinates& got);

Json solve_to_json(const SolveResult& r);
Json roundtrip_report(const RunConfig& config);
Json verify_report(const RunConfig& config, const std::vector<ExactPoint>& points);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loopfact::cli
