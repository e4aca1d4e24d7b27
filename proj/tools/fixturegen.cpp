// Writes the exact fixtures used by the floating-point tests:
//   oracle_points.json     built-in exact points
//   negative_control.json  points checked with the mutated delta_2 enumerator
//   ratio_coeffs.json      exact Taylor coefficients of the product ratios,
//                          taken from the oracle's own product expansion
// Usage: fixturegen <dir>

#include <filesystem>
#include <iostream>

#include "loopfact/json_io.hpp"

using namespace loopfact;

namespace {

Json ratio_entry(const ExactPoint& p) {
  const auto m = expand_product_exact(p);
  const auto q = p.side == Side::k2 ? exact_taylor_quotient(m.at(1, 0), m.at(1, 1), p.n_max)
                                    : exact_taylor_quotient(m.at(0, 1), m.at(0, 0), p.n_max);
  Json coeffs = Json::array();
  for (const Exact& c : q) coeffs.push_back(scalar_to_json(c));
  Json entry = points_to_json({p}).at("points").at(0);
  entry["ratio"] = coeffs;
  return entry;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: fixturegen <dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  const auto points = stock_points();
  write_json_file((dir / "oracle_points.json").string(), points_to_json(points));

  std::vector<ExactPoint> broken;
  for (const auto& p : points) {
    if (p.side != Side::k2 || p.values.size() < 2) continue;
    ExactPoint q = p;
    q.name = p.name + "_mutated";
    q.mutation = Mutation::drop_j_less_than_i;
    broken.push_back(q);
  }
  write_json_file((dir / "negative_control.json").string(), points_to_json(broken));

  Json ratios = Json::array();
  for (const auto& p : points) ratios.push_back(ratio_entry(p));
  write_json_file((dir / "ratio_coeffs.json").string(), Json{{"points", ratios}});
  std::cout << "wrote " << points.size() << " points, " << broken.size() << " negative controls to " << dir << "\n";
  return 0;
}
