#include "loopfact/json_io.hpp"

#include <cmath>
#include <fstream>

namespace loopfact {

template <>
Complex scalar_from_json<Complex>(const Json& j);
template <>
Exact scalar_from_json<Exact>(const Json& j);

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

const Json& field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), std::string("missing field '") + key + "'");
  return j.at(key);
}

double finite_number(const Json& j) {
  require(j.is_number(), "expected a number");
  const double v = j.get<double>();
  require(std::isfinite(v), "non-finite number");
  return v;
}

std::string rational_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  require(j.is_number_integer(), "exact values must be rational strings");
  return std::to_string(j.get<long long>());
}

Side side_from_text(const std::string& s) {
  if (s == "k1") return Side::k1;
  if (s == "k2") return Side::k2;
  throw InvalidInput("side must be k1 or k2");
}

std::vector<Complex> complex_list(const Json& j) {
  require(j.is_array(), "expected a list of [re, im] pairs");
  std::vector<Complex> v;
  for (const auto& x : j) v.push_back(scalar_from_json<Complex>(x));
  return v;
}

Json complex_list_json(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(scalar_to_json(x));
  return a;
}

}  // namespace

// + 0.0 folds -0.0 into 0.0
Json scalar_to_json(const Complex& c) { return Json::array({c.real() + 0.0, c.imag() + 0.0}); }

Json scalar_to_json(const Exact& c) { return Json::array({c.re().get_str(), c.im().get_str()}); }

template <>
Complex scalar_from_json<Complex>(const Json& j) {
  require(j.is_array() && j.size() == 2, "complex values are [re, im] pairs");
  return {finite_number(j[0]), finite_number(j[1])};
}

template <>
Exact scalar_from_json<Exact>(const Json& j) {
  require(j.is_array() && j.size() == 2, "complex values are [re, im] pairs");
  return Exact::parse(rational_text(j[0]), rational_text(j[1]));
}

template <Coefficient T>
Json series_to_json(const LaurentSeries<T>& s) {
  Json coeffs = Json::array();
  for (const T& c : s.coeffs()) coeffs.push_back(scalar_to_json(c));
  const IndexRange r = s.reliable();
  return Json{{"lo", s.lo()},
              {"hi", s.hi()},
              {"coeffs", coeffs},
              {"reliable", Json::array({r.lo, r.hi})},
              {"closed", Json::array({s.closed_below(), s.closed_above()})}};
}

template <Coefficient T>
LaurentSeries<T> series_from_json(const Json& j) {
  try {
    const int lo = field(j, "lo").get<int>();
    const int hi = field(j, "hi").get<int>();
    const Json& c = field(j, "coeffs");
    require(c.is_array() && hi >= lo && c.size() == static_cast<std::size_t>(hi - lo + 1),
            "coeffs length must match the window");
    std::vector<T> coeffs;
    for (const auto& x : c) coeffs.push_back(scalar_from_json<T>(x));
    std::int64_t rlo = -detail::kUnbounded;
    std::int64_t rhi = detail::kUnbounded;
    if (j.contains("closed")) {
      const Json& closed = j.at("closed");
      const Json& rel = field(j, "reliable");
      require(closed.is_array() && closed.size() == 2 && rel.is_array() && rel.size() == 2, "bad reliability fields");
      if (!closed[0].get<bool>()) rlo = rel[0].get<int>();
      if (!closed[1].get<bool>()) rhi = rel[1].get<int>();
    }
    return {lo, std::move(coeffs), rlo, rhi};
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed series: ") + e.what());
  }
}

template <Coefficient T>
Json loop_to_json(const MatrixLoop<T>& m) {
  const IndexRange w = m.window();
  return Json{{"window", Json::array({w.lo, w.hi})},
              {"entries", Json::array({Json::array({series_to_json(m.at(0, 0)), series_to_json(m.at(0, 1))}),
                                       Json::array({series_to_json(m.at(1, 0)), series_to_json(m.at(1, 1))})})}};
}

template <Coefficient T>
MatrixLoop<T> loop_from_json(const Json& j) {
  const Json& e = field(j, "entries");
  require(e.is_array() && e.size() == 2 && e[0].is_array() && e[0].size() == 2 && e[1].is_array() &&
              e[1].size() == 2,
          "entries must be a 2x2 grid");
  return {series_from_json<T>(e[0][0]), series_from_json<T>(e[0][1]), series_from_json<T>(e[1][0]),
          series_from_json<T>(e[1][1])};
}

Json mat2_to_json(const Mat2<Complex>& m) {
  return Json::array({Json::array({scalar_to_json(m[0][0]), scalar_to_json(m[0][1])}),
                      Json::array({scalar_to_json(m[1][0]), scalar_to_json(m[1][1])})});
}

Mat2<Complex> mat2_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2 && j[0].is_array() && j[0].size() == 2 && j[1].is_array() && j[1].size() == 2,
          "2x2 matrix expected");
  Mat2<Complex> m;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) m[a][b] = scalar_from_json<Complex>(j[a][b]);
  }
  return m;
}

Json coords_to_json(const RootSubgroupCoordinates& c) {
  return Json{{"eta", complex_list_json(c.eta)},
              {"zeta", complex_list_json(c.zeta)},
              {"chi0_im", c.chi0_im},
              {"chi_plus", complex_list_json(c.chi_plus)}};
}

RootSubgroupCoordinates coords_from_json(const Json& j) {
  try {
    RootSubgroupCoordinates c;
    // --zeta-only output leaves eta null
    if (!field(j, "eta").is_null()) c.eta = complex_list(j.at("eta"));
    c.zeta = complex_list(field(j, "zeta"));
    // "chi": null marks a solve that dropped chi; it stays zero
    if (j.contains("chi") && !j.at("chi").is_null()) throw InvalidInput("\"chi\" must be null");
    if (j.contains("chi0_im")) c.chi0_im = finite_number(j.at("chi0_im"));
    if (j.contains("chi_plus")) c.chi_plus = complex_list(j.at("chi_plus"));
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed coordinates: ") + e.what());
  }
}

Json triangular_to_json(const TriangularFactorization& t) {
  Json j{{"l", loop_to_json(t.l)}, {"m0", scalar_to_json(t.m0)}, {"a0", t.a0}, {"u", loop_to_json(t.u)}};
  if (std::abs(t.det0 - Complex(1.0)) > 1e-12) j["det0"] = scalar_to_json(t.det0);
  return j;
}

TriangularFactorization triangular_from_json(const Json& j) {
  TriangularFactorization t;
  t.l = loop_from_json<Complex>(field(j, "l"));
  t.m0 = scalar_from_json<Complex>(field(j, "m0"));
  t.a0 = finite_number(field(j, "a0"));
  t.u = loop_from_json<Complex>(field(j, "u"));
  if (j.contains("det0")) t.det0 = scalar_from_json<Complex>(j.at("det0"));
  return t;
}

Json birkhoff_to_json(const BirkhoffFactorization& b) {
  Json j{{"g_minus", loop_to_json(b.g_minus)}, {"g0", mat2_to_json(b.g_zero)}, {"g_plus", loop_to_json(b.g_plus)}};
  j["condition_estimate"] = b.condition_estimate ? Json(*b.condition_estimate) : Json(nullptr);
  j["positive_residual"] = b.positive_residual;
  return j;
}

BirkhoffFactorization birkhoff_from_json(const Json& j) {
  BirkhoffFactorization b;
  b.g_minus = loop_from_json<Complex>(field(j, "g_minus"));
  b.g_zero = mat2_from_json(field(j, "g0"));
  b.g_plus = loop_from_json<Complex>(field(j, "g_plus"));
  if (j.contains("condition_estimate") && !j.at("condition_estimate").is_null()) {
    b.condition_estimate = finite_number(j.at("condition_estimate"));
  }
  if (j.contains("positive_residual")) b.positive_residual = finite_number(j.at("positive_residual"));
  return b;
}

Json report_to_json(const OracleReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name}, {"n", c.n}, {"ok", c.ok}, {"lhs", c.lhs}, {"rhs", c.rhs}});
  }
  return Json{{"checks", checks}};
}

std::vector<ExactPoint> points_from_json(const Json& j) {
  try {
    std::vector<ExactPoint> points;
    const Json& list = field(j, "points");
    require(list.is_array(), "points must be a list");
    for (const auto& p : list) {
      ExactPoint point;
      point.name = p.value("name", std::string("unnamed"));
      point.side = side_from_text(p.value("side", std::string("k2")));
      const Json& values = field(p, "values");
      require(values.is_array(), "values must be a list");
      for (const auto& v : values) point.values.push_back(scalar_from_json<Exact>(v));
      point.n_max = p.value("n_max", 8);
      require(point.n_max >= 0, "n_max must be nonnegative");
      const std::string mutation = p.value("mutation", std::string("none"));
      if (mutation == "none") {
        point.mutation = Mutation::none;
      } else if (mutation == "drop_j_less_than_i") {
        point.mutation = Mutation::drop_j_less_than_i;
      } else {
        throw InvalidInput("unknown mutation '" + mutation + "'");
      }
      points.push_back(std::move(point));
    }
    return points;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed fixture: ") + e.what());
  }
}

Json points_to_json(const std::vector<ExactPoint>& points) {
  Json list = Json::array();
  for (const auto& p : points) {
    Json values = Json::array();
    for (const auto& v : p.values) values.push_back(scalar_to_json(v));
    list.push_back(Json{{"name", p.name},
                        {"side", p.side == Side::k1 ? "k1" : "k2"},
                        {"values", values},
                        {"n_max", p.n_max},
                        {"mutation", p.mutation == Mutation::none ? "none" : "drop_j_less_than_i"}});
  }
  return Json{{"points", list}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << j.dump(2) << '\n';
}

template Json series_to_json<Complex>(const LaurentSeries<Complex>&);
template Json series_to_json<Exact>(const LaurentSeries<Exact>&);
template LaurentSeries<Complex> series_from_json<Complex>(const Json&);
template LaurentSeries<Exact> series_from_json<Exact>(const Json&);
template Json loop_to_json<Complex>(const MatrixLoop<Complex>&);
template Json loop_to_json<Exact>(const MatrixLoop<Exact>&);
template MatrixLoop<Complex> loop_from_json<Complex>(const Json&);
template MatrixLoop<Exact> loop_from_json<Exact>(const Json&);

}  // namespace loopfact
