#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mocktrace/errors.hpp"
#include "mocktrace/modfun.hpp"

using namespace mocktrace;
using I = __int128;

// ---- exact wide-integer q-series oracles ----
static std::vector<I> imul(const std::vector<I>& a, const std::vector<I>& b, size_t len) {
  std::vector<I> r(len, 0);
  for (size_t i = 0; i < len && i < a.size(); ++i)
    for (size_t j = 0; i + j < len && j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}
static std::vector<I> idiv(const std::vector<I>& a, const std::vector<I>& b, size_t len) {
  std::vector<I> r(len, 0);
  for (size_t n = 0; n < len; ++n) {
    I s = a[n];
    for (size_t k = 1; k <= n; ++k) s -= b[k] * r[n - k];
    r[n] = s;
  }
  return r;
}
static I isigma(int n, int k) {
  I s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) {
      I p = 1;
      for (int t = 0; t < k; ++t) p *= d;
      s += p;
    }
  return s;
}
// prod (1 - q^n)^24 by direct multiplication, not the pentagonal series
static std::vector<I> delta_over_q(size_t len) {
  std::vector<I> r(len, 0);
  r[0] = 1;
  for (size_t n = 1; n < len; ++n)
    for (int t = 0; t < 24; ++t)
      for (size_t k = len - 1; k >= n; --k) r[k] -= r[k - n];
  return r;
}
// coefficient list of j: index n + 1 holds c(n)
static std::vector<I> exact_j_e4(size_t len) {
  std::vector<I> e4(len);
  e4[0] = 1;
  for (size_t n = 1; n < len; ++n) e4[n] = 240 * isigma(int(n), 3);
  return idiv(imul(imul(e4, e4, len), e4, len), delta_over_q(len), len);
}
static std::vector<I> exact_j_e6(size_t len) {
  std::vector<I> e6(len);
  e6[0] = 1;
  for (size_t n = 1; n < len; ++n) e6[n] = -504 * isigma(int(n), 5);
  auto r = idiv(imul(e6, e6, len), delta_over_q(len), len);
  r[1] += 1728;
  return r;
}

TEST_CASE("j coefficients") {
  auto j = j_coeffs(48);
  CHECK(j.lead == -1);
  CHECK(j.coeff(-1) == 1.0);
  CHECK(j.coeff(0) == 744.0);
  CHECK(j.coeff(1) == 196884.0);
  auto e6 = exact_j_e6(26);
  CHECK(e6[3] == 21493760);
  CHECK(j.coeff(2) == 21493760.0);
  auto e4 = exact_j_e4(26);
  for (int n = -1; n <= 24; ++n) {
    CHECK(e4[n + 1] == e6[n + 1]);
    double ex = static_cast<double>(e4[n + 1]);
    CHECK(std::fabs(j.coeff(n) - ex) <= 1e-15 * std::fabs(ex));
  }
  CHECK_THROWS_AS(j_coeffs(65), ConfigError);
}

TEST_CASE("Faber basis") {
  auto j0 = jm_coeffs(0, 10);
  CHECK(j0.lead == 0);
  CHECK(j0.coeff(0) == 1.0);
  for (int n = 1; n <= 10; ++n) CHECK(j0.coeff(n) == 0.0);
  auto j1 = jm_coeffs(1, 20);
  CHECK(j1.coeff(0) == 0.0);
  CHECK(j1.coeff(1) == 196884.0);
  for (int m = 0; m <= 10; ++m) {
    auto e = jm_coeffs(m, 48);
    CHECK(e.coeff(-m) == 1.0);
    for (int k = -m + 1; k <= 0; ++k) CHECK(e.coeff(k) == 0.0);
    CHECK(e.last() == 48);
    CHECK(jm_expansion_valid(m, e));
  }
  CHECK_THROWS_AS(jm_coeffs(11, 10), ConfigError);
  CHECK_THROWS_AS(jm_coeffs(2, 65), ConfigError);
}

TEST_CASE("j_2 against exact wide-integer arithmetic") {
  auto ej = exact_j_e4(24);
  ej[1] = 0;  // j_1
  // j_1^2 has lead -2; subtract 2 c(1) to kill the constant
  std::vector<I> sq(24, 0);
  for (size_t a = 0; a < ej.size(); ++a)
    for (size_t b = 0; b < ej.size() && a + b < sq.size(); ++b) sq[a + b] += ej[a] * ej[b];
  sq[2] -= 2 * ej[2];  // index e + 2 for exponent e
  CHECK(sq[3] == 42987520);
  auto j2 = jm_coeffs(2, 48);
  CHECK(j2.coeff(1) == 42987520.0);
  for (int n = 1; n <= 20; ++n) {
    double ex = static_cast<double>(sq[n + 2]);
    CHECK(std::fabs(j2.coeff(n) - ex) <= 1e-15 * std::fabs(ex));
  }
}

TEST_CASE("Faber duality n c_m(n) = m c_n(m)") {
  for (int m = 1; m <= 10; ++m)
    for (int n = 1; n <= 10; ++n) {
      double l = n * jm_coeffs(m, 48).coeff(n), r = m * jm_coeffs(n, 48).coeff(m);
      CHECK(std::fabs(l - r) <= 1e-14 * std::fabs(l));
    }
}

TEST_CASE("Hecke formula c_m(n) = sum_{a | (m,n)} (m/a) c_1(mn/a^2)") {
  auto j = jm_coeffs(1, 64);
  for (int m = 2; m <= 6; ++m) {
    auto e = jm_coeffs(m, 48);
    for (int n = 1; m * n <= 64; ++n) {
      double h = 0;
      for (int a = 1; a <= std::min(m, n); ++a)
        if (m % a == 0 && n % a == 0) h += double(m / a) * j.coeff(m * n / (a * a));
      CHECK(std::fabs(e.coeff(n) - h) <= 1e-14 * std::fabs(h));
    }
  }
}

TEST_CASE("fundamental domain reduction") {
  auto [t1, g1] = reduce_to_fundamental(cplx(0, 1));
  CHECK(t1 == cplx(0, 1));
  CHECK(g1 == UnimodularMatrix{});
  auto [t2, g2] = reduce_to_fundamental(cplx(5, 1));
  CHECK(std::abs(t2 - cplx(0, 1)) < 1e-15);
  CHECK(g2 == (UnimodularMatrix{1, -5, 0, 1}));
  auto [t3, g3] = reduce_to_fundamental(cplx(0.1, 0.1));
  CHECK(t3.imag() >= std::sqrt(3.0) / 2 - 1e-12);
  CHECK(std::fabs(t3.real()) <= 0.5 + 1e-12);
  CHECK(std::abs(t3) >= 1 - 1e-12);
  CHECK(std::abs(g3.act(cplx(0.1, 0.1)) - t3) < 1e-12);
  CHECK_THROWS_AS(reduce_to_fundamental(cplx(0.3, 0)), DomainError);
}

TEST_CASE("special values of j_1") {
  CHECK(std::abs(eval_jm(1, cplx(0, 1)) - 984.0) < 1e-9);
  CHECK(std::abs(eval_jm(1, cplx(0.5, std::sqrt(3.0) / 2)) - (-744.0)) < 1e-9);
  CHECK(std::abs(eval_jm(1, cplx(0, std::sqrt(2.0))) - (8000.0 - 744)) < 1e-8);
  CHECK(std::abs(eval_jm(1, cplx(-0.5, std::sqrt(7.0) / 2)) - (-3375.0 - 744)) < 1e-8);
  CHECK(eval_jm(0, cplx(0.3, 0.01)) == cplx(1, 0));
}

static UnimodularMatrix random_gamma(std::mt19937_64& rng, int steps = 5) {
  std::uniform_int_distribution<int> pick(0, 2), shift(-3, 3);
  UnimodularMatrix g;
  for (int k = 0; k < steps; ++k) {
    int t = shift(rng);
    switch (pick(rng)) {
      case 0: g = UnimodularMatrix{1, t, 0, 1} * g; break;
      case 1: g = UnimodularMatrix{1, 0, t, 1} * g; break;
      default: g = UnimodularMatrix{0, -1, 1, 0} * g; break;
    }
  }
  return g;
}

TEST_CASE("Gamma-invariance of j_m") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-2, 2), uy(0.05, 2);
  double worst = 0;
  for (int it = 0; it < 100; ++it) {
    cplx tau(ux(rng), uy(rng));
    auto g = random_gamma(rng);
    for (int m : {1, 2, 3, 5}) {
      cplx a = eval_jm(m, tau), b = eval_jm(m, g.act(tau));
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("cusp matrices") {
  auto c0 = cusp_matrix(0, 1);
  CHECK(c0.gamma == (UnimodularMatrix{0, -1, 1, 0}));
  auto ci = cusp_matrix(1, 0);
  CHECK(ci.gamma.C == 0);
  CHECK(ci.gamma.D == -1);
  CHECK(ci.gamma == (UnimodularMatrix{-1, 0, 0, -1}));
  auto c = cusp_matrix(-3, 7);
  CHECK(c.gamma.C == 7);
  CHECK(c.gamma.D == 3);
  CHECK(c.gamma.det() == 1);
  CHECK_THROWS_AS(cusp_matrix(2, 4), DomainError);
  // gamma_alpha sends alpha to infinity: C alpha + D = 0
  for (i64 r = -6; r <= 6; ++r)
    for (i64 s = 1; s <= 6; ++s) {
      if (gcd(r, s) != 1) continue;
      auto m = cusp_matrix(r, s);
      CHECK(m.gamma.C * r + m.gamma.D * s == 0);
    }
}

TEST_CASE("j_{m,Q} on the imaginary axis") {
  QuadForm Q{0, 1, 0};
  for (int m : {1, 2, 3})
    for (double y : {0.7, 1.0, 1.3, 2.0, 3.0}) {
      cplx direct = eval_jm(m, cplx(0, y)) - 2 * std::sinh(2 * kPi * m * y) - 2 * std::sinh(2 * kPi * m / y);
      cplx v = eval_jmQ(m, Q, cplx(0, y));
      CHECK(std::abs(v - direct) <= 1e-9 * std::max(1.0, std::exp(2 * kPi * m * std::max(y, 1 / y))));
      CHECK(std::fabs(v.imag()) < 1e-9);
    }
  for (int m : {1, 2, 3})
    for (double y : {2.0, 5.0, 8.0}) CHECK(std::abs(eval_jmQ(m, Q, cplx(0, 1 / y)) - eval_jmQ(m, Q, cplx(0, y))) < 1e-9);
}

TEST_CASE("j_{m,Q}(iy)/y near the endpoint follows -2 sinh(2 pi m y)/y") {
  QuadForm Q{0, 1, 0};
  for (int m : {1, 2, 3})
    for (double y : {1e-2, 3e-3, 1e-3, 1e-4, 1e-5, 1e-8}) {
      double v = eval_jmQ(m, Q, cplx(0, y)).real() / y;
      double exact = -2 * std::sinh(2 * kPi * m * y) / y;
      CHECK(std::fabs(v - exact) < 1e-9 * std::fabs(exact));
      double x = 2 * kPi * m * y;
      CHECK(std::fabs(v + 4 * kPi * m) <= 4 * kPi * m * x * x / 6 * 1.01 + 1e-12);
    }
  CHECK(std::fabs(eval_jmQ(1, Q, cplx(0, 1e-6)).real() / 1e-6 + 4 * kPi) < 1e-6);
}

TEST_CASE("phase-sign flag is indistinguishable on the imaginary axis") {
  QuadForm Q{0, 1, 0};
  JmQOptions flip;
  flip.phase_sign = +1;
  for (double y : {0.01, 0.5, 1.0, 4.0}) CHECK(std::abs(eval_jmQ(1, Q, cplx(0, y)) - eval_jmQ(1, Q, cplx(0, y), flip)) < 1e-9);
  // on [1,2,0] the image -1/tau lies on Re = 1/2, where e(+u) = e(-u) again; [1,3,0] maps to Re = 1/3
  QuadForm Q4{1, 3, 0};
  cplx tau = cplx(-1.5, 0) + std::polar(1.5, 0.3);
  CHECK(std::abs(eval_jmQ(1, Q4, tau) - eval_jmQ(1, Q4, tau, flip)) > 1e-3);
}

static cplx point_on(const QuadForm& Q, double theta) {
  i64 r = isqrt(Q.disc());
  if (Q.a == 0) return cplx(-double(Q.c) / Q.b, std::exp(theta));
  double x0 = -double(Q.b) / (2.0 * Q.a), R = double(r) / (2.0 * std::abs(double(Q.a)));
  return cplx(x0, 0) + R * std::polar(1.0, theta);
}

TEST_CASE("left invariance j_{m,sigma Q}(sigma tau) = j_{m,Q}(tau)") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> th(0.2, kPi - 0.2);
  double worst = 0;
  for (const QuadForm& Q : {QuadForm{0, 1, 0}, QuadForm{1, 2, 0}, QuadForm{1, 3, 0}, QuadForm{2, 3, 0}}) {
    for (int it = 0; it < 25; ++it) {
      auto sg = random_gamma(rng, 4);
      double t = Q.a == 0 ? std::uniform_real_distribution<double>(-2, 2)(rng) : th(rng);
      cplx tau = point_on(Q, t);
      for (int m : {1, 2}) {
        cplx a = eval_jmQ(m, Q, tau), b = eval_jmQ(m, apply(sg, Q), sg.act(tau));
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
      }
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("decay toward both cusps") {
  for (const QuadForm& Q : {QuadForm{0, 1, 0}, QuadForm{1, 2, 0}, QuadForm{2, 3, 0}})
    for (int m : {1, 2, 3}) {
      double prev0 = 1e300, prev1 = 1e300;
      for (double e : {1e-2, 1e-4, 1e-6, 1e-8}) {
        double a0, a1;
        if (Q.a == 0) {
          a0 = std::abs(eval_jmQ(m, Q, point_on(Q, std::log(e))));
          a1 = std::abs(eval_jmQ(m, Q, point_on(Q, -std::log(e))));
        } else {
          a0 = std::abs(eval_jmQ(m, Q, point_on(Q, e)));
          a1 = std::abs(eval_jmQ(m, Q, point_on(Q, kPi - e)));
        }
        CHECK(a0 < prev0);
        CHECK(a1 < prev1);
        prev0 = a0;
        prev1 = a1;
      }
      CHECK(prev0 < 1e-5);
      CHECK(prev1 < 1e-5);
    }
}
