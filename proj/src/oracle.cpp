#include "loopfact/oracle.hpp"

#include <algorithm>
#include <functional>

namespace loopfact {

namespace {

using Poly = std::map<int, Exact>;
using PolyMat = std::array<Poly, 4>;

void poly_add_term(Poly& p, int power, const Exact& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = p.try_emplace(power, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c;
  for (const auto& [i, x] : a) {
    for (const auto& [j, y] : b) poly_add_term(c, i + j, x * y);
  }
  return c;
}

Poly poly_sum(const Poly& a, const Poly& b) {
  Poly c = a;
  for (const auto& [i, y] : b) poly_add_term(c, i, y);
  return c;
}

PolyMat polymat_mul(const PolyMat& a, const PolyMat& b) {
  return {poly_sum(poly_mul(a[0], b[0]), poly_mul(a[1], b[2])), poly_sum(poly_mul(a[0], b[1]), poly_mul(a[1], b[3])),
          poly_sum(poly_mul(a[2], b[0]), poly_mul(a[3], b[2])), poly_sum(poly_mul(a[2], b[1]), poly_mul(a[3], b[3]))};
}

LaurentSeries<Exact> to_series(const Poly& p) {
  if (p.empty()) return {};
  const int lo = p.begin()->first;
  const int hi = p.rbegin()->first;
  std::vector<Exact> c(static_cast<std::size_t>(hi - lo + 1), Exact(0));
  for (const auto& [k, v] : p) c[static_cast<std::size_t>(k - lo)] = v;
  return {lo, std::move(c)};
}

std::string text(const Exact& x) { return x.to_string(); }

OracleCheck compare(std::string name, int n, const Exact& lhs, const Exact& rhs) {
  return {std::move(name), n, lhs == rhs, text(lhs), text(rhs)};
}

std::vector<Exact> padded(std::span<const Exact> v, std::size_t size) {
  std::vector<Exact> out(v.begin(), v.end());
  if (out.size() < size) out.resize(size, Exact(0));
  return out;
}

Exact one_plus_norm(const Exact& w) { return Exact(mpq_class(1) + w.norm()); }

// Ratio coefficients of the exact product at `values`, orders 0..degree.
std::vector<Exact> product_ratio(std::span<const Exact> values, Side side, int degree) {
  ExactPoint p;
  p.side = side;
  p.values.assign(values.begin(), values.end());
  const auto m = expand_product_exact(p);
  return side == Side::k2 ? exact_taylor_quotient(m.at(1, 0), m.at(1, 1), degree)
                          : exact_taylor_quotient(m.at(0, 1), m.at(0, 0), degree);
}

// Index of variable k in the value vector: k - 1 for zeta, k for eta.
int base_of(Side side) { return side == Side::k2 ? 1 : 0; }

}  // namespace

bool OracleReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.ok; });
}

std::optional<int> OracleReport::first_mismatch() const {
  for (const auto& c : checks) {
    if (!c.ok) return c.n;
  }
  return std::nullopt;
}

void OracleReport::append(const OracleReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

void OracleReport::require() const {
  for (const auto& c : checks) {
    if (!c.ok) throw MismatchAt(c.n, c.lhs, c.rhs);
  }
}

MatrixLoop<Exact> expand_product_exact(const ExactPoint& point, bool normalized, std::optional<IndexRange> out) {
  PolyMat m{Poly{{0, Exact(1)}}, Poly{}, Poly{}, Poly{{0, Exact(1)}}};
  mpq_class scale(1);
  const int base = base_of(point.side);
  for (std::size_t idx = 0; idx < point.values.size(); ++idx) {
    const Exact& w = point.values[idx];
    const int n = static_cast<int>(idx) + base;
    if (normalized) {
      auto r = rational_sqrt(mpq_class(1) + w.norm());
      if (!r) throw IrrationalNormalizer();
      scale /= *r;
    }
    if (w.is_zero()) continue;
    PolyMat f{Poly{{0, Exact(1)}}, Poly{}, Poly{}, Poly{{0, Exact(1)}}};
    if (point.side == Side::k2) {
      f[1] = Poly{{-n, w}};
      f[2] = Poly{{n, -w.conj()}};
    } else {
      f[1] = Poly{{n, -w.conj()}};
      f[2] = Poly{{-n, w}};
    }
    m = polymat_mul(f, m);
  }
  if (normalized) {
    for (auto& p : m) {
      for (auto& [k, v] : p) v *= Exact(scale);
    }
  }
  MatrixLoop<Exact> loop(to_series(m[0]), to_series(m[1]), to_series(m[2]), to_series(m[3]));
  return out ? ml_truncate(loop, *out) : loop;
}

std::vector<Exact> exact_taylor_quotient(const LaurentSeries<Exact>& num, const LaurentSeries<Exact>& den, int degree) {
  const Exact d0 = den.coeff(0);
  if (d0.is_zero()) throw ZeroConstantTerm();
  std::vector<Exact> q(static_cast<std::size_t>(degree + 1), Exact(0));
  for (int n = 0; n <= degree; ++n) {
    Exact s = num.coeff(n);
    for (int k = 1; k <= n; ++k) s -= den.coeff(k) * q[static_cast<std::size_t>(n - k)];
    q[static_cast<std::size_t>(n)] = s / d0;
  }
  return q;
}

Exact delta2_coeff_mutated(std::span<const Exact> zeta, int n) {
  const int count = static_cast<int>(zeta.size());
  Exact total(0);
  // Pairs (j_s, i_s) in 1..N with only i_s < j_(s+1) kept; at most N pairs.
  std::function<void(int, int, int, const Exact&)> extend = [&](int min_j, int weight, int pairs, const Exact& acc) {
    if (weight == n) total += acc;
    if (pairs == count) return;
    for (int j = min_j; j <= count; ++j) {
      for (int i = 1; i <= count; ++i) {
        const Exact term = acc * zeta[static_cast<std::size_t>(j - 1)] * -zeta[static_cast<std::size_t>(i - 1)].conj();
        if (term.is_zero()) continue;
        extend(i + 1, weight + i - j, pairs + 1, term);
      }
    }
  };
  extend(1, 0, 0, Exact(1));
  return total;
}

OracleReport verify_lemma_coeffs(const ExactPoint& point, int n_max) {
  OracleReport report;
  if (point.side != Side::k2) return report;
  const std::span<const Exact> zeta = point.values;
  const auto m = expand_product_exact(point);
  auto delta = [&](int n) {
    return point.mutation == Mutation::none ? delta2_coeff<Exact>(zeta, n) : delta2_coeff_mutated(zeta, n);
  };
  for (int n = 0; n <= n_max; ++n) {
    const Exact g = gamma2_coeff<Exact>(zeta, n);
    const Exact d = delta(n);
    report.checks.push_back(compare("lemma_gamma2", n, m.at(1, 0).coeff(n), g));
    report.checks.push_back(compare("lemma_delta2", n, m.at(1, 1).coeff(n), d));
    report.checks.push_back(compare("shape_11", n, m.at(0, 0).coeff(-n), d.conj()));
    report.checks.push_back(compare("shape_12", n, m.at(0, 1).coeff(-n), -g.conj()));
  }
  return report;
}

OracleReport verify_ratio_coeffs(const ExactPoint& point, int n_max) {
  OracleReport report;
  const Side side = point.side;
  const int base = base_of(side);
  const std::span<const Exact> values = point.values;
  const auto q = product_ratio(values, side, n_max);
  for (int n = 0; n <= n_max; ++n) {
    const Exact e = side == Side::k2 ? xi_enum<Exact>(values, n) : psi_enum<Exact>(values, n);
    report.checks.push_back(compare(side == Side::k2 ? "theorem_xi" : "theorem_psi", n, q[static_cast<std::size_t>(n)], e));
  }

  // ratio_n + conj(w_n) prod_{s<n}(1+|w_s|^2) must not depend on w_n.
  const std::size_t size = static_cast<std::size_t>(n_max + 1 - base);
  const auto v = padded(values, size);
  const Exact shift(mpq_class(1, 2), mpq_class(2, 3));
  for (int n = base; n <= n_max; ++n) {
    auto remainder = [&](const std::vector<Exact>& w) {
      Exact weight(1);
      for (int s = base; s < n; ++s) weight *= one_plus_norm(w[static_cast<std::size_t>(s - base)]);
      const Exact wn = w[static_cast<std::size_t>(n - base)];
      return product_ratio(w, side, n)[static_cast<std::size_t>(n)] + wn.conj() * weight;
    };
    auto alt = v;
    alt[static_cast<std::size_t>(n - base)] += shift;
    report.checks.push_back(compare("leading_term", n, remainder(v), remainder(alt)));
  }
  return report;
}

SignedWords cancellation_survivors(int count, int n, int s_max) {
  if (s_max < 0) s_max = n - 1;
  using Word = std::vector<int>;

  // Increasing chains in 1..count: odd length read i j ... i (gamma), even length read j i ... i (delta).
  std::vector<std::pair<Word, int>> gammas;
  std::vector<std::pair<Word, int>> deltas;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << count); ++mask) {
    Word w;
    for (int k = 0; k < count; ++k) {
      if (mask >> k & 1U) w.push_back(k + 1);
    }
    const bool odd = w.size() % 2 == 1;
    int weight = 0;
    for (std::size_t p = 0; p < w.size(); ++p) weight += ((p % 2 == 0) == odd) ? w[p] : -w[p];
    (odd ? gammas : deltas).emplace_back(std::move(w), weight);
  }

  SignedWords net;
  std::function<void(Word&, int, int)> attach = [&](Word& word, int remaining, int pieces) {
    if (remaining == 0) {
      net[word] += pieces % 2 == 0 ? 1 : -1;
      return;
    }
    if (pieces == s_max) return;
    for (const auto& [d, wd] : deltas) {
      if (wd > remaining) continue;
      const std::size_t keep = word.size();
      word.insert(word.end(), d.begin(), d.end());
      attach(word, remaining - wd, pieces + 1);
      word.resize(keep);
    }
  };
  for (const auto& [g, wg] : gammas) {
    if (wg > n) continue;
    Word word = g;
    attach(word, n - wg, 0);
  }
  std::erase_if(net, [](const auto& kv) { return kv.second == 0; });
  return net;
}

SignedWords xi_chain_words(int count, int n) {
  using Word = std::vector<int>;
  // Chains i0 (j1 i1) ... (jr ir) with j_s < i_s, j_s <= i_(s-1), signed (-1)^r.
  SignedWords expected;
  const int cap = std::min(n, count);
  std::function<void(Word&, int)> chain = [&](Word& word, int remaining) {
    if (remaining == 0) {
      expected[word] += (word.size() / 2) % 2 == 0 ? 1 : -1;
      return;
    }
    const int prev = word.back();
    for (int j = 1; j <= prev; ++j) {
      for (int i = j + 1; i <= std::min(cap, j + remaining); ++i) {
        word.push_back(j);
        word.push_back(i);
        chain(word, remaining - (i - j));
        word.resize(word.size() - 2);
      }
    }
  };
  for (int i0 = 1; i0 <= cap; ++i0) {
    Word word{i0};
    chain(word, n - i0);
  }
  return expected;
}

OracleReport verify_cancellation(const ExactPoint& point, int n, int s_max) {
  OracleReport report;
  if (point.side != Side::k2 || n < 1) return report;
  const int count = static_cast<int>(point.values.size());
  const SignedWords net = cancellation_survivors(count, n, s_max);
  const SignedWords expected = xi_chain_words(count, n);

  auto describe = [](const SignedWords& words) { return std::to_string(words.size()) + " words"; };
  OracleCheck words{"cancellation_words", n, net == expected, describe(net), describe(expected)};
  report.checks.push_back(words);

  Exact value(0);
  for (const auto& [word, c] : net) {
    Exact term(c);
    for (std::size_t p = 0; p < word.size(); ++p) {
      const Exact& z = point.values[static_cast<std::size_t>(word[p] - 1)];
      term *= p % 2 == 0 ? -z.conj() : z;
    }
    value += term;
  }
  report.checks.push_back(compare("cancellation_value", n, value, xi_enum<Exact>(point.values, n)));
  return report;
}

Exact displayed_xi(std::span<const Exact> zeta, int n) {
  const auto z = padded(zeta, 4);
  const Exact p1 = one_plus_norm(z[0]);
  const Exact p2 = one_plus_norm(z[1]);
  const Exact p3 = one_plus_norm(z[2]);
  switch (n) {
    case 1: return -z[0].conj();
    case 2: return -z[1].conj() * p1;
    case 3: return -z[2].conj() * p1 * p2 + -(z[0] * z[1].conj() * z[1].conj()) * p1;
    case 4: {
      const Exact z3b = z[2].conj();
      const Exact z2b = z[1].conj();
      const Exact group = z[1] * z3b * z3b * p2 + Exact(2) * z[0] * z2b * z3b * p2 + z[0] * z[0] * z2b * z2b * z2b;
      return -z[3].conj() * p1 * p2 * p3 - p1 * group;
    }
    default: throw std::invalid_argument("closed form only through order 4");
  }
}

Exact displayed_psi(std::span<const Exact> eta, int n) {
  const auto e = padded(eta, 2);
  switch (n) {
    case 0: return -e[0].conj();
    case 1: return -e[1].conj() * one_plus_norm(e[0]);
    default: throw std::invalid_argument("closed form only through order 1");
  }
}

OracleReport verify_displayed_coeffs(std::span<const Exact> zeta, std::span<const Exact> eta) {
  OracleReport report;
  if (!zeta.empty()) {
    const auto z = padded(zeta, 4);
    const auto q = product_ratio(z, Side::k2, 4);
    for (int n = 1; n <= 4; ++n) report.checks.push_back(compare("display_xi", n, q[static_cast<std::size_t>(n)], displayed_xi(z, n)));
  }
  if (!eta.empty()) {
    const auto e = padded(eta, 2);
    const auto q = product_ratio(e, Side::k1, 1);
    for (int n = 0; n <= 1; ++n) report.checks.push_back(compare("display_psi", n, q[static_cast<std::size_t>(n)], displayed_psi(e, n)));
  }
  return report;
}

std::vector<ExactPoint> stock_points() {
  auto q = [](const char* re, const char* im) { return Exact::parse(re, im); };
  std::vector<ExactPoint> points;
  const std::vector<std::pair<std::string, std::vector<Exact>>> base{
      {"one", {q("1", "0")}},
      {"half_third", {q("1/2", "0"), q("0", "-1/3")}},
      {"three_fifths", {q("0", "3/5"), q("1/2", "0"), q("1", "0")}},
      {"generic", {q("2/7", "-1/3"), q("-3/5", "1/4"), q("1/6", "5/9"), q("0", "-2/3")}},
  };
  for (const auto& [name, values] : base) {
    points.push_back({"zeta_" + name, Side::k2, values, 8, Mutation::none});
    points.push_back({"eta_" + name, Side::k1, values, 8, Mutation::none});
  }
  points.push_back({"eta_i_third", Side::k1, {q("0", "1"), q("1/3", "0")}, 4, Mutation::none});
  return points;
}

OracleReport verify_point(const ExactPoint& point) {
  OracleReport report;
  if (point.side == Side::k2) {
    report.append(verify_lemma_coeffs(point, point.n_max));
    report.append(verify_ratio_coeffs(point, point.n_max));
    for (int n = 1; n <= std::min(point.n_max, 6); ++n) report.append(verify_cancellation(point, n));
    report.append(verify_displayed_coeffs(point.values, {}));
  } else {
    report.append(verify_ratio_coeffs(point, point.n_max));
    report.append(verify_displayed_coeffs({}, point.values));
  }
  return report;
}

}  // namespace loopfact
