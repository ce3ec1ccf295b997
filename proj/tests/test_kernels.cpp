#include <omp.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <numeric>

#include "doctest.h"
#include "mocktrace/errors.hpp"
#include "mocktrace/geodesic.hpp"
#include "mocktrace/kernels.hpp"

using namespace mocktrace;

namespace {
struct Threads {
  int saved = omp_get_max_threads();
  explicit Threads(int n) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
};

bool same_bits(cplx a, cplx b) { return std::memcmp(&a, &b, sizeof a) == 0; }

double naive_phi(int m, double s, double y) {
  if (m == 0) return std::pow(y, s);
  return 2 * kPi * std::sqrt(std::abs(m) * y) * bessel_I(s - 0.5, 2 * kPi * std::abs(m) * y);
}
}  // namespace

TEST_CASE("chunks cover every index once, in either mode") {
  Threads th(3);
  for (ExecMode mode : {ExecMode::serial, ExecMode::parallel}) {
    std::vector<int> hits(10007, 0);
    for_each_chunk(10007, 100, [&](long, long lo, long hi) {
      for (long i = lo; i < hi; ++i) hits[i]++;
    }, mode);
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
  CHECK_THROWS_AS(for_each_chunk(5, 0, [](long, long, long) {}, ExecMode::serial), ContractViolation);
}

TEST_CASE("chunked reduction is bitwise reproducible across modes and thread counts") {
  auto body = [](long lo, long hi) {
    double s = 0;
    for (long i = lo; i < hi; ++i) s += 1.0 / (1.0 + i * 0.37) * (i % 3 ? 1 : -1);
    return s;
  };
  double serial = chunked_reduce(1000003L, 0.0, body, ExecMode::serial);
  for (int t : {1, 2, 4, 7}) {
    Threads th(t);
    double par = chunked_reduce(1000003L, 0.0, body, ExecMode::parallel);
    CHECK(std::memcmp(&par, &serial, sizeof par) == 0);
  }
}

TEST_CASE("coset table") {
  CosetTable t = build_coset_table(40);
  long count = 1;
  for (i64 c = 1; c <= 40; ++c)
    for (i64 d = -40; d <= 40; ++d) count += std::gcd(c, d) == 1;
  CHECK(static_cast<long>(t.size()) == count);
  for (size_t i = 0; i < t.size(); ++i) {
    CHECK(t.A[i] * t.d[i] - t.B[i] * t.c[i] == 1);
    CHECK(std::max(std::abs(t.c[i]), std::abs(t.d[i])) <= 40);
  }
  CHECK_THROWS_AS(build_coset_table(0), ContractViolation);
}

TEST_CASE("phi matches the Bessel expression on both sides of the series switch") {
  for (int m : {0, 1, 2, 5})
    for (double s : {1.25, 1.5, 2.0, 3.0}) {
      PhiEval phi(m, s);
      for (double y : {1e-6, 1e-3, 0.01, 0.05, 0.1, 0.3, 0.6, 1.0, 2.0}) {
        double ref = naive_phi(m, s, y);
        CHECK(std::abs(phi(y) - ref) <= 1e-12 * std::abs(ref));
      }
    }
  CHECK(PhiEval(1, 1.0)(1.0) == doctest::Approx(2 * std::sinh(2 * kPi)).epsilon(1e-12));
  CHECK_THROWS_AS(PhiEval(1, 1.5)(0.0), DomainError);
}

TEST_CASE("Phi series matches direct theta quadrature") {
  for (int m : {0, 1, 3})
    for (double s : {1.5, 2.0}) {
      PhiIntegral Phi(m, s);
      for (double R : {1e-4, 1e-3, 0.01, 0.02}) {
        if (R > Phi.max_radius()) continue;
        auto f = [&](double th) {
          return cplx(std::cos(2 * kPi * m * R * std::cos(th)) * naive_phi(m, s, R * std::sin(th)) / std::sin(th), 0);
        };
        QuadOptions o;
        o.abs_tol = 1e-14 * std::pow(R, s);
        double ref = integrate(f, 1e-300, kPi, o).value.real();
        CHECK(std::abs(Phi(R) - ref) <= 1e-10 * std::abs(ref));
      }
    }
  CHECK_THROWS_AS(PhiIntegral(1, 1.5)(1.0), DomainError);
}

TEST_CASE("node sums agree with a naive coset loop and across modes") {
  CosetTable t = build_coset_table(30);
  std::vector<cplx> taus = {cplx(0.1, 0.9), cplx(-0.4, 1.7), cplx(0.3, 0.2)};
  std::vector<size_t> skip = {0, 5};
  for (int m : {0, 1, 2}) {
    PhiEval phi(m, 1.5);
    std::vector<cplx> ser, par;
    gm_node_sums(t, phi, skip, taus, ser, ExecMode::serial);
    {
      Threads th(4);
      gm_node_sums(t, phi, skip, taus, par, ExecMode::parallel);
    }
    for (size_t j = 0; j < taus.size(); ++j) {
      CHECK(same_bits(ser[j], par[j]));
      cplx ref = 0;
      for (size_t i = 0; i < t.size(); ++i) {
        if (i == 0 || i == 5) continue;
        UnimodularMatrix g{t.A[i], t.B[i], t.c[i], t.d[i]};
        cplx gt = g.act(taus[j]);
        ref += std::polar(naive_phi(m, 1.5, gt.imag()), -2 * kPi * m * gt.real());
      }
      CHECK(std::abs(ser[j] - ref) <= 1e-11 * std::abs(ref));
    }
  }
}

TEST_CASE("annulus sum agrees with a naive form loop and across modes") {
  for (QuadForm Q : {QuadForm{0, 1, 0}, QuadForm{1, 2, 0}, QuadForm{2, 3, 0}}) {
    for (int m : {0, 1}) {
      PhiIntegral Phi(m, 1.5);
      cplx ser = annulus_sum(Q, m, Phi, 50, 120, ExecMode::serial);
      cplx par;
      {
        Threads th(3);
        par = annulus_sum(Q, m, Phi, 50, 120, ExecMode::parallel);
      }
      CHECK(same_bits(ser, par));
      cplx ref = 0;
      double sd = std::sqrt(double(Q.disc()));
      for (i64 c = 0; c <= 120; ++c)
        for (i64 d = -120; d <= 120; ++d) {
          if (std::gcd(c, d) != 1 || (c == 0 && d != 1)) continue;
          if (std::max(c, std::abs(d)) <= 50) continue;
          UnimodularMatrix g = UnimodularMatrix{0, -1, 1, 0};
          if (c != 0) {
            i64 x, y;
            ext_gcd(d, c, x, y);
            g = {x, -y, c, d};
          }
          QuadForm P = apply(g, Q);
          if (P.a == 0) continue;
          ref += Phi(sd / (2.0 * std::abs(double(P.a)))) * std::polar(1.0, kPi * m * double(P.b) / double(P.a));
        }
      CHECK(std::abs(ser - ref) <= 1e-12 * std::abs(ref));
    }
  }
  CHECK_THROWS_AS(annulus_sum(QuadForm{0, 1, 0}, 0, PhiIntegral(0, 2), 10, 5, ExecMode::serial), ContractViolation);
}

TEST_CASE("c_terms fills f(1..cmax) in order") {
  Threads th(2);
  auto v = c_terms(1000, [](long c) { return 1.0 / c; }, ExecMode::parallel);
  REQUIRE(v.size() == 1000);
  for (long c = 1; c <= 1000; ++c) CHECK(v[c - 1] == 1.0 / c);
  CHECK(c_terms(0, [](long) { return 0.0; }, ExecMode::serial).empty());
}
