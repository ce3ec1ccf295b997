#include <cmath>
#include <numeric>

#include "doctest.h"
#include "mocktrace/errors.hpp"
#include "mocktrace/geodesic.hpp"
#include "mocktrace/qform.hpp"
#include "mocktrace/series.hpp"

using namespace mocktrace;

namespace {
std::vector<i64> brute_roots(i64 n, i64 M) {
  std::vector<i64> out;
  for (i64 b = 0; b < M; ++b)
    if (mod(b * b - n, M) == 0) out.push_back(b);
  return out;
}

// S_m from the defining sum with the genus character read off a represented value
double s_m_oracle(int m, i64 d, i64 D, i64 c) {
  i64 n = d * D, M = 4 * c;
  cplx s = 0;
  for (i64 b = 0; b < M; ++b) {
    if (mod(b * b - n, M) != 0) continue;
    QuadForm Q{c, b, (b * b - n) / M};
    int chi = 0;
    if (gcd(gcd(gcd(Q.a, Q.b), Q.c), D) == 1)
      for (i64 x = 0; x <= 30 && chi == 0; ++x)
        for (i64 y = -30; y <= 30; ++y) {
          i64 v = Q.eval(x, y);
          if (v != 0 && gcd(v, D) == 1) {
            chi = kronecker(D, v);
            break;
          }
        }
    s += double(chi) * std::polar(1.0, kPi * double(m * b) / double(c));
  }
  return s.real();
}
}  // namespace

TEST_CASE("square roots modulo M agree with brute force") {
  SquareRootTable rt(3000);
  for (i64 n : {1, 4, 5, 8, 9, 12, 16, 17, 25, 36, 49, 64, 100})
    for (i64 M = 1; M <= 3000; M += 13) CHECK(rt.roots(n, M) == brute_roots(n, M));
  CHECK_THROWS_AS(rt.roots(1, 3001), ContractViolation);
  CHECK_THROWS_AS(rt.roots(0, 12), ContractViolation);
}

TEST_CASE("K+ at modulus 4") {
  // a = 1, 3 with (4/a) = 1, eps = 1, i; doubled since c = 1
  // K+(0,0;4) = 2 (1 - i)(1 + i) = 4,  K+(1,1;4) = 2 (1 - i)(e(1/2) + i e(3/2)) = -4
  CHECK(kloosterman_plus(0, 0, 4) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(kloosterman_plus(1, 1, 4) == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK_THROWS_AS(kloosterman_plus(1, 1, 6), DomainError);
  CHECK_THROWS_AS(kloosterman_plus(1, 1, 0), DomainError);
}

TEST_CASE("K+ is symmetric in d and D") {
  double worst = 0;
  for (i64 c = 1; c <= 100; ++c)
    for (i64 d : {0, 1, 4, 5, 8, 9, 12})
      for (i64 D : {0, 1, 4, 5, 8, 9, 12}) {
        if (D < d) continue;
        worst = std::max(worst, std::abs(kloosterman_plus(d, D, 4 * c) - kloosterman_plus(D, d, 4 * c)));
      }
  CHECK(worst <= 1e-9);
}

TEST_CASE("K+(0, 0; 4c) is 4 k phi(k) at c = k^2 and 0 otherwise") {
  for (i64 c = 1; c <= 120; ++c) {
    double expect = 0;
    if (is_square(c)) {
      i64 k = isqrt(c), phi = 0;
      for (i64 j = 1; j <= k; ++j) phi += gcd(j, k) == 1;
      expect = 4.0 * k * phi;
    }
    CHECK(std::abs(kloosterman_plus(0, 0, 4 * c) - expect) < 1e-9);
  }
}

TEST_CASE("fast K+ tables match the defining sum") {
  for (auto [d, D] : {std::pair<i64, i64>{1, 1}, {5, 1}, {1, 5}, {4, 1}, {1, 4}, {8, 1}, {12, 5}, {5, 12}, {9, 4}}) {
    auto t = kloosterman_plus_table(d, D, 200, ExecMode::serial);
    auto p = kloosterman_plus_table(d, D, 200, ExecMode::parallel);
    CHECK(t == p);
    for (i64 c = 1; c <= 200; ++c) CHECK(std::abs(t[c - 1] - kloosterman_plus(d, D, 4 * c)) < 1e-9);
  }
  CHECK_THROWS_AS(kloosterman_plus_table(4, 4, 30000), ConfigError);
}

TEST_CASE("Weil-type growth of K+") {
  auto t = kloosterman_plus_table(1, 1, 20000, ExecMode::serial);
  // least-squares slope of log rms |K+| over dyadic blocks
  std::vector<double> xs, ys;
  for (i64 lo = 16; 2 * lo <= 20000; lo *= 2) {
    double ss = 0;
    for (i64 c = lo; c < 2 * lo; ++c) ss += t[c - 1] * t[c - 1];
    xs.push_back(std::log(1.5 * lo));
    ys.push_back(0.5 * std::log(ss / double(lo)));
  }
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < xs.size(); ++i) num += (xs[i] - mx) * (ys[i] - my), den += (xs[i] - mx) * (xs[i] - mx);
  CHECK(num / den <= 0.6);
}

TEST_CASE("S_m matches its definition and the divisor identity with K+") {
  for (auto [d, D] : {std::pair<i64, i64>{1, 1}, {4, 1}, {9, 1}, {5, 5}})
    for (i64 c = 1; c <= 50; ++c)
      for (int m = 0; m <= 6; ++m) {
        double s = s_m_sum(m, d, D, 4 * c);
        CHECK(std::abs(s - s_m_oracle(m, d, D, c)) < 1e-9);
        double rhs = 0;
        for (i64 n : divisors(m == 0 ? c : gcd(m, c)))
          rhs += kronecker(D, n) * std::sqrt(double(n) / c) * kloosterman_plus(d, i64(m) * m * D / (n * n), 4 * c / n);
        CHECK(std::abs(s - rhs / 2) < 1e-9);
      }
}

TEST_CASE("S_m special cases") {
  for (i64 c = 1; c <= 60; ++c) {
    CHECK(s_m_sum(0, 1, 1, 4 * c) == doctest::Approx(double(brute_roots(1, 4 * c).size())));
    for (int m = 0; m <= 3; ++m) CHECK(std::abs(s_m_sum(m, 4, 1, 4 * c) - s_m_sum(m + 2 * c, 4, 1, 4 * c)) < 1e-9);
  }
  CHECK_THROWS_AS(s_m_sum(1, 5, 1, 8), DomainError);
  CHECK_THROWS_AS(s_m_sum(1, 1, 4, 8), DomainError);
}

TEST_CASE("b series") {
  // symmetry from the direct sums in both orders
  for (auto [d, D] : {std::pair<i64, i64>{1, 4}, {5, 1}}) {
    double x = 0, y = 0, pre = std::pow(2.0, -1.5) * kPi * std::pow(double(d * D), 0.25), B = kPi * std::sqrt(double(d * D));
    for (i64 c = 1; c <= 300; ++c) {
      double j = pre / c * bessel_J(1.0, B / c);
      x += kloosterman_plus(d, D, 4 * c) * j;
      y += kloosterman_plus(D, d, 4 * c) * j;
    }
    CHECK(std::abs(x - y) < 1e-9);
    CHECK(std::abs(b_series(d, D, 1.0, 300).value - x) < 1e-9);
  }
  // middle case against a transcription of the formula
  double s = 1.2, ref = 0;
  for (i64 c = 1; c <= 200; ++c)
    ref += kloosterman_plus(0, 5, 4 * c) * std::pow(2.0, -4 * s) * std::pow(kPi, s + 0.25) * std::pow(5.0, s - 0.25) *
           std::pow(double(c), -2 * s);
  CHECK(std::abs(b_series(0, 5, s, 200).value - ref) < 1e-12);
  // d = D = 0: partial sums settle towards the closed form
  SeriesValue a = b_series(0, 0, 1.0, 100), b = b_series(0, 0, 1.0, 400), c = b_series(0, 0, 1.0, 1600);
  CHECK(std::abs(c.value - b.value) < std::abs(b.value - a.value));
  CHECK(std::abs(c.value - b_zero(0, 1.0)) < std::abs(b.value - b_zero(0, 1.0)));
  CHECK(std::abs(c.value - b_zero(0, 1.0)) < 0.02 * b_zero(0, 1.0));
  CHECK_THROWS_AS(b_series(1, 1, 0.75, 200), DomainError);
  CHECK_THROWS_AS(b_series(1, 1, 1.0, 50), ContractViolation);
}

TEST_CASE("closed forms of the zero-argument series") {
  const double s = 1.5;
  for (i64 n : {0, 1, 4, 5, 8, 9}) {
    double pre = n == 0 ? std::pow(2.0, 0.5 - 6 * s) * std::sqrt(kPi) * gamma_real(2 * s)
                        : std::pow(2.0, -4 * s) * std::pow(kPi, s + 0.25) * std::pow(double(n), s - 0.25);
    double partial = 0;
    for (i64 c = 1; c <= 2000; ++c) partial += kloosterman_plus(0, n, 4 * c) * std::pow(double(c), -2 * s);
    // the omitted tail is below sum_{c > 2000} 8 c^{-2.5}
    CHECK(std::abs(b_zero(n, s) / pre - partial) < 3e-5);
    double e = 1e-7;
    CHECK(std::abs(b_zero_residue(n) - e * b_zero(n, 0.75 + e)) < 1e-6);
  }
  CHECK(b_zero_residue(0) == doctest::Approx(3 / (16 * kPi)).epsilon(1e-14));
  CHECK(b_zero_residue(5) == 0);
}

TEST_CASE("coefficients a(d, D)") {
  CoeffValue a11 = coeff_a(1, 1);
  CHECK(std::abs(a11.series.value - (-16.028)) < 0.05);
  CHECK(a11.series.tail_estimate < 0.01);
  CHECK(a11.F.size() == 4);
  for (auto [d, D] : {std::pair<i64, i64>{1, 4}, {1, 5}}) {
    CoeffValue x = coeff_a(d, D), y = coeff_a(D, d);
    CHECK(std::abs(x.series.value - y.series.value) <= x.series.tail_estimate + y.series.tail_estimate + 1e-12);
  }
  CoeffValue a51 = coeff_a(5, 1);
  TraceResult t = trace_nonsquare(5, 1, 1);
  CHECK(std::abs(a51.series.value - t.value) <= a51.series.tail_estimate + t.err_estimate);
  CHECK_THROWS_AS(coeff_a(2, 1), DomainError);
  CHECK_THROWS_AS(coeff_a(1, 1, CoeffOptions{{0.1}, {1000}}), ContractViolation);
}

TEST_CASE("S_m series side of the cycle-integral identity") {
  SeriesValue a = prop1_rhs(1, 1, 0, 2.0, 5000), b = prop1_rhs(1, 1, 0, 2.0, 10000);
  CHECK(std::abs(a.value - b.value) < 1e-4);
  CHECK(std::abs(b.value - 0.625) < b.tail_estimate);
  // small-argument Bessel bound on the m > 0 terms: |J_nu(x)| <= (x/2)^nu / Gamma(nu + 1)
  for (i64 c = 1000; c <= 1100; ++c) {
    double x = kPi * 1 / double(c), term = std::abs(s_m_sum(1, 1, 1, 4 * c)) / std::sqrt(double(c)) * bessel_J(1.0, x);
    CHECK(term <= brute_roots(1, 4 * c).size() / std::sqrt(double(c)) * (x / 2) + 1e-15);
  }
  SeriesValue p = prop1_rhs(1, 1, 1, 1.5, 20000, ExecMode::serial), q = prop1_rhs(1, 1, 1, 1.5, 20000);
  CHECK(p.value == q.value);
  CHECK_THROWS_AS(prop1_rhs(5, 1, 1, 1.5, 1000), DomainError);
  CHECK_THROWS_AS(prop1_rhs(1, 1, 1, 1.0, 1000), DomainError);
}

TEST_CASE("divisor combination of coefficients") {
  SeriesValue one = thm2_rhs(1, 1, 1);
  CHECK(one.value == coeff_a(1, 1).series.value);
  SeriesValue two = thm2_rhs(1, 1, 2);
  CHECK(two.value == doctest::Approx(coeff_a(1, 1).series.value + 2 * coeff_a(4, 1).series.value).epsilon(1e-13));
  TraceResult t = trace_square(1, 1, 2);
  CHECK(std::abs(two.value - t.value) <= two.tail_estimate + t.err_estimate);
  CHECK_THROWS_AS(thm2_rhs(1, 4, 1), DomainError);
  CHECK_THROWS_AS(thm2_rhs(1, 1, 0), DomainError);
}
