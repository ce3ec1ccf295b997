#include "mocktrace/verify.hpp"

#include <cmath>

#include "mocktrace/errors.hpp"
#include "mocktrace/modfun.hpp"

namespace mocktrace {

json verify_prop1(const Prop1Check& c) {
  Prop1Options o;
  o.bound = c.bound;
  Prop1Side lhs = prop1_lhs(c.d, c.D, c.m, c.s, o);
  i64 cmax = c.c_max > 0 ? c.c_max : (c.s >= 2 ? 10000 : 200000);
  SeriesValue rhs = prop1_rhs(c.d, c.D, c.m, c.s, cmax);
  double diff = std::abs(lhs.value - rhs.value);
  double rel = diff / std::max(std::abs(rhs.value), 1e-300);
  return json{{"d", c.d},         {"D", c.D},     {"m", c.m},         {"s", c.s},
              {"lhs", lhs},       {"rhs", rhs},   {"abs_diff", diff}, {"rel_diff", rel},
              {"tol", c.rel_tol}, {"pass", rel <= c.rel_tol}};
}

json verify_thm2(i64 d, i64 D, int m, double tol) {
  TraceResult lhs = trace(d, D, m);
  SeriesValue rhs = thm2_rhs(d, D, m);
  double diff = std::abs(lhs.value - rhs.value);
  double err = lhs.err_estimate + rhs.tail_estimate;
  return json{{"d", d},          {"D", D},     {"m", m},           {"lhs", lhs},
              {"rhs", rhs},      {"abs_diff", diff}, {"combined_err", err}, {"tol", tol},
              {"pass", diff <= err && err <= tol}};
}

const std::vector<DiscPair>& kloosterman_grid() {
  static const std::vector<DiscPair> g = {{1, 1}, {4, 1}, {1, 4}, {9, 1}, {4, 4}, {5, 5}};
  return g;
}

json verify_kloosterman(const std::vector<DiscPair>& grid, i64 c_max, int m_max, double tol) {
  json pairs = json::array();
  bool all = true;
  for (auto [d, D] : grid) {
    json p{{"d", d}, {"D", D}};
    double worst = 0;
    long checked = 0;
    try {
      for (i64 c = 1; c <= c_max; ++c)
        for (int m = 0; m <= m_max; ++m) {
          double s = s_m_sum(m, d, D, 4 * c), rhs = 0;
          for (i64 n : divisors(m == 0 ? c : gcd(m, c)))
            rhs += kronecker(D, n) * std::sqrt(double(n) / c) * kloosterman_plus(d, i64(m) * m * D / (n * n), 4 * c / n);
          worst = std::max(worst, std::abs(s - rhs / 2));
          ++checked;
        }
      p["max_err"] = worst;
      p["checked"] = checked;
      p["pass"] = worst <= tol;
    } catch (const DomainError& e) {
      p["error"] = e.what();
      p["pass"] = false;
    }
    all = all && p["pass"].get<bool>();
    pairs.push_back(p);
  }
  return json{{"c_max", c_max}, {"m_max", m_max}, {"tol", tol}, {"pairs", pairs}, {"pass", all}};
}

json verify_symmetry(const std::vector<DiscPair>& grid, i64 c_max, double tol) {
  json pairs = json::array();
  bool all = true;
  for (auto [d, D] : grid) {
    double worst = 0;
    for (i64 c = 1; c <= c_max; ++c)
      worst = std::max(worst, std::abs(kloosterman_plus(d, D, 4 * c) - kloosterman_plus(D, d, 4 * c)));
    all = all && worst <= tol;
    pairs.push_back(json{{"d", d}, {"D", D}, {"max_err", worst}, {"pass", worst <= tol}});
  }
  return json{{"c_max", c_max}, {"tol", tol}, {"pairs", pairs}, {"pass", all}};
}

json verify_values() {
  json checks = json::array();
  bool all = true;
  auto add = [&](const std::string& name, double expected, double got, double tol) {
    bool ok = std::abs(got - expected) <= tol;
    all = all && ok;
    checks.push_back(json{{"name", name}, {"expected", expected}, {"value", got}, {"tol", tol}, {"pass", ok}});
  };
  for (auto [d, v] : {std::pair<i64, double>{-3, -248}, {-4, 492}, {-7, -4119}})
    add("trace d=" + std::to_string(d) + " D=1 m=1", v, trace_negative(d, 1, 1).value, 1e-6);
  QExpansion j = j_coeffs(2);
  add("j coefficient q^1", 196884, j.coeff(1), 0);
  add("j coefficient q^2", 21493760, j.coeff(2), 0);
  add("trace d=1 D=1 m=1", -16.028, trace_square(1, 1, 1).value, 1e-3);
  return json{{"checks", checks}, {"pass", all}};
}

}  // namespace mocktrace
