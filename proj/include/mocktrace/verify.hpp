#pragma once

#include <utility>
#include <vector>

#include "mocktrace/serialize.hpp"

namespace mocktrace {

// each report carries "pass": bool; the CLI maps a false pass to exit code 2

struct Prop1Check {
  i64 d = 1, D = 1;
  int m = 0;
  double s = 2.0;
  i64 bound = 0;  // 0: prop1_lhs default
  i64 c_max = 0;  // 0: 1e4 for s >= 2, 2e5 below
  double rel_tol = 1e-2;
};
json verify_prop1(const Prop1Check& c);

// |trace - sum_n ...| within the combined error estimate, and that estimate <= tol
json verify_thm2(i64 d, i64 D, int m, double tol = 0.1);

using DiscPair = std::pair<i64, i64>;
const std::vector<DiscPair>& kloosterman_grid();  // (1,1), (4,1), (1,4), (9,1), (4,4), (5,5)

// S_m(d, D; 4c) against sum_{n | (m, c)} (D/n) sqrt(n / c) K+(d, m^2 D / n^2; 4c / n) / 2 for c <= c_max, m <= m_max
json verify_kloosterman(const std::vector<DiscPair>& grid, i64 c_max = 50, int m_max = 6, double tol = 1e-9);
// K+(d, D; 4c) = K+(D, d; 4c) for c <= c_max
json verify_symmetry(const std::vector<DiscPair>& grid, i64 c_max = 100, double tol = 1e-9);
// classical CM traces, j coefficients and the d = D = 1 cusp trace
json verify_values();

}  // namespace mocktrace
