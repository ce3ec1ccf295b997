#pragma once

#include <vector>

#include "mocktrace/arith.hpp"
#include "mocktrace/kernels.hpp"

namespace mocktrace {

struct SeriesValue {
  double value = 0;
  i64 c_max = 0;
  double s = 0;
  double tail_estimate = 0;
};

// ---- square roots modulo M ----

// all b in [0, M) with b^2 = n (mod M), via a smallest-prime-factor sieve, Hensel lifting and CRT
class SquareRootTable {
 public:
  explicit SquareRootTable(i64 max_modulus);
  void roots(i64 n, i64 M, std::vector<i64>& out) const;
  std::vector<i64> roots(i64 n, i64 M) const;
  i64 max_modulus() const { return static_cast<i64>(spf_.size()) - 1; }

 private:
  std::vector<int> spf_;
};

// ---- Kloosterman sums ----

inline constexpr double kRealResidueTol = 1e-9;

// K+(d, D; modulus) by the defining finite sum; modulus = 4c
double kloosterman_plus(i64 d, i64 D, i64 modulus);

// K+(d, D; 4c) for c = 1..c_max (entry c - 1); dD > 0 uses square roots of dD mod 4c
std::vector<double> kloosterman_plus_table(i64 d, i64 D, i64 c_max, ExecMode mode = ExecMode::parallel);

// S_m(d, D; 4c), dD a positive square, D fundamental
double s_m_sum(int m, i64 d, i64 D, i64 modulus);

// ---- the coefficient series b(d, D, s) ----

// truncated c-sum; tail_estimate is the spread of the partial sums over c in [c_max / 10, c_max]
SeriesValue b_series(i64 d, i64 D, double s, i64 c_max, ExecMode mode = ExecMode::parallel);

// closed forms of b(n, 0, s) = b(0, n, s) and of b(0, 0, s) (n = 0), valid for s > 3/4
double b_zero(i64 n, double s);
// residue of b(n, 0, s) at s = 3/4; zero unless n is a square
double b_zero_residue(i64 n);

// dD > 0: the J-Bessel series with its continuum tail added, averaged over cutoffs X in [c_max / 10, c_max];
// tail_estimate compares with the average over [c_max / 20, c_max / 2]. `table` holds K+(d, D; 4c) for c >= 1
SeriesValue b_smoothed(i64 d, i64 D, double s, i64 c_max, const std::vector<double>& table);

struct CoeffOptions {
  std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025};
  std::vector<i64> c_max = {30000, 60000, 120000, 200000};  // one per delta
  ExecMode mode = ExecMode::parallel;
};

struct CoeffValue {
  SeriesValue series;           // s = 3/4, c_max = largest cutoff
  std::vector<double> deltas;
  std::vector<double> F;        // (dD)^{-1/2} [b(d,D,s) - b(d,0,s) b(0,D,s) / b(0,0,s)] at s = 3/4 + delta
  std::vector<double> F_err;
  double extrapolation_err = 0;
};

// a(d, D) by polynomial extrapolation of F to delta = 0
CoeffValue coeff_a(i64 d, i64 D, const CoeffOptions& opt = {});

// ---- Poincare-series pairing and the divisor sum ----

// value includes a continuum tail from the mean of S_m over (c_max / 2, c_max];
// tail_estimate is the largest change against the same completion at c_max / 2, / 4, / 8
SeriesValue prop1_rhs(i64 d, i64 D, int m, double s, i64 c_max, ExecMode mode = ExecMode::parallel);

// sum over n | m of (D / (m/n)) n a(n^2 D, d)
SeriesValue thm2_rhs(i64 d, i64 D, int m, const CoeffOptions& opt = {});

}  // namespace mocktrace
