#pragma once

// JSON encodings of the library's values (nlohmann::json).

#include <json.hpp>

#include "loopfact/oracle.hpp"
#include "loopfact/solver.hpp"

namespace loopfact {

using Json = nlohmann::ordered_json;

Json scalar_to_json(const Complex& c);
Json scalar_to_json(const Exact& c);
template <Coefficient T>
T scalar_from_json(const Json& j);

template <Coefficient T>
Json series_to_json(const LaurentSeries<T>& s);
template <Coefficient T>
LaurentSeries<T> series_from_json(const Json& j);

template <Coefficient T>
Json loop_to_json(const MatrixLoop<T>& m);
template <Coefficient T>
MatrixLoop<T> loop_from_json(const Json& j);

Json mat2_to_json(const Mat2<Complex>& m);
Mat2<Complex> mat2_from_json(const Json& j);

Json coords_to_json(const RootSubgroupCoordinates& c);
RootSubgroupCoordinates coords_from_json(const Json& j);

Json triangular_to_json(const TriangularFactorization& t);
TriangularFactorization triangular_from_json(const Json& j);

Json birkhoff_to_json(const BirkhoffFactorization& b);
BirkhoffFactorization birkhoff_from_json(const Json& j);

Json report_to_json(const OracleReport& r);

/// {"points": [{"name", "side": "k1"|"k2", "values": [["p/q","p/q"], ...], "n_max", "mutation"}]}
std::vector<ExactPoint> points_from_json(const Json& j);
Json points_to_json(const std::vector<ExactPoint>& points);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace loopfact
