#include "mocktrace/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "mocktrace/errors.hpp"

namespace mocktrace {

int worker_count() { return omp_get_max_threads(); }

void for_each_chunk(long n, long chunk, const std::function<void(long, long, long)>& body, ExecMode mode) {
  if (chunk < 1) throw ContractViolation("for_each_chunk: chunk must be positive");
  long nchunks = (n + chunk - 1) / chunk;
  if (mode == ExecMode::serial) {
    for (long k = 0; k < nchunks; ++k) body(k, k * chunk, std::min(n, (k + 1) * chunk));
    return;
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < nchunks; ++k) body(k, k * chunk, std::min(n, (k + 1) * chunk));
}

CosetTable build_coset_table(i64 bound) {
  if (bound < 1) throw ContractViolation("build_coset_table: bound must be >= 1");
  CosetTable t;
  t.bound = bound;
  auto push = [&](i64 A, i64 B, i64 c, i64 d) {
    t.A.push_back(A), t.B.push_back(B), t.c.push_back(c), t.d.push_back(d);
  };
  push(1, 0, 0, 1);
  for (i64 c = 1; c <= bound; ++c)
    for (i64 d = -bound; d <= bound; ++d) {
      i64 x, y;
      if (ext_gcd(d, c, x, y) != 1) continue;
      push(x, -y, c, d);  // A d - B c = d x + c y = 1
    }
  return t;
}

// ---- phi ----

static constexpr double kPhiSeriesSwitch = 2.0;  // 2 pi |m| y <= this uses the power series
static constexpr int kPhiTerms = 24;

PhiEval::PhiEval(int m, double s) : m_(std::abs(m)), s_(s) {
  if (m_ == 0) return;
  switch_y_ = kPhiSeriesSwitch / (2 * kPi * m_);
  double pm = kPi * m_;
  for (int k = 0; k < kPhiTerms; ++k) {
    double lg = (s - 0.5 + 2 * k) * std::log(pm) - log_gamma_real(k + 1.0) - log_gamma_real(s + 0.5 + k);
    coef_.push_back(2 * kPi * std::sqrt(double(m_)) * std::exp(lg));
  }
}

double PhiEval::operator()(double y) const {
  if (!(y > 0)) throw DomainError("phi: y must be positive");
  if (m_ == 0) return std::pow(y, s_);
  if (y <= switch_y_) {
    // (pi m y)^2 <= 1/256 below switch_y_ / 16, where six terms reach double precision
    int top = y <= switch_y_ / 16 ? 6 : kPhiTerms;
    double y2 = y * y, p = 0;
    for (int k = top - 1; k >= 0; --k) p = p * y2 + coef_[k];
    return std::pow(y, s_) * p;
  }
  return 2 * kPi * std::sqrt(double(m_) * y) * bessel_I(s_ - 0.5, 2 * kPi * m_ * y);
}

static double log_beta(double a, double b) { return log_gamma_real(a) + log_gamma_real(b) - log_gamma_real(a + b); }

PhiIntegral::PhiIntegral(int m, double s) : s_(s) {
  m = std::abs(m);
  const int N = 16;
  if (m == 0) {
    coef_ = {std::exp(log_beta(s / 2, 0.5))};
    max_R_ = 1e300;
    return;
  }
  max_R_ = 0.5 / (2 * kPi * m);
  coef_.assign(N, 0.0);
  double pm = kPi * m;
  for (int j = 0; j < N; ++j)
    for (int k = 0; j + k < N; ++k) {
      // phi series term j times cos series term k, integrated against sin^{s-1+2j} cos^{2k}
      double lg = std::log(2 * kPi * std::sqrt(double(m))) + (s - 0.5 + 2 * j) * std::log(pm) -
                  log_gamma_real(j + 1.0) - log_gamma_real(s + 0.5 + j) + 2 * k * std::log(2 * pm) -
                  log_gamma_real(2 * k + 1.0) + log_beta((s + 2 * j) / 2, k + 0.5);
      coef_[j + k] += (k % 2 ? -1.0 : 1.0) * std::exp(lg);
    }
}

double PhiIntegral::operator()(double R) const {
  if (!(R > 0)) throw DomainError("Phi: R must be positive");
  if (R > max_R_) throw DomainError("Phi: radius outside the series range");
  double r2 = R * R, p = 0;
  for (int n = static_cast<int>(coef_.size()) - 1; n >= 0; --n) p = p * r2 + coef_[n];
  return std::pow(R, s_) * p;
}

// ---- coset sums ----

void gm_node_sums(const CosetTable& t, const PhiEval& phi, const std::vector<size_t>& skip,
                  const std::vector<cplx>& taus, std::vector<cplx>& out, ExecMode mode) {
  const size_t nt = taus.size();
  const long n = static_cast<long>(t.size());
  const long chunk = kReduceChunk;
  const long nchunks = (n + chunk - 1) / chunk;
  const i64 m = phi.m();
  std::vector<cplx> part(nchunks * nt, 0.0);
  for_each_chunk(
      n, chunk,
      [&](long k, long lo, long hi) {
        cplx* acc = &part[k * nt];
        for (long i = lo; i < hi; ++i) {
          if (std::find(skip.begin(), skip.end(), static_cast<size_t>(i)) != skip.end()) continue;
          const i64 c = t.c[i], d = t.d[i];
          const double cd = double(c), dd = double(d);
          const double top = c == 0 ? 0.0 : double(mod(m * t.A[i], c)) / cd;
          for (size_t j = 0; j < nt; ++j) {
            const double x = taus[j].real(), y = taus[j].imag();
            double im, fr;  // Im g tau and m Re g tau mod 1
            if (c == 0) {
              im = y;
              fr = m * x;
            } else {
              double u = cd * x + dd, den = u * u + cd * cd * y * y;
              im = y / den;
              fr = top - m * u / (cd * den);
            }
            double p = phi(im);
            if (m == 0)
              acc[j] += p;
            else {
              fr -= std::floor(fr);
              double sn, cs;
              sincos(2 * kPi * fr, &sn, &cs);
              acc[j] += cplx(p * cs, -p * sn);
            }
          }
        }
      },
      mode);
  out.assign(nt, 0.0);
  for (long k = 0; k < nchunks; ++k)
    for (size_t j = 0; j < nt; ++j) out[j] += part[k * nt + j];
}

cplx annulus_sum(const QuadForm& Q, int m, const PhiIntegral& Phi, i64 lo, i64 hi, ExecMode mode) {
  if (lo < 1 || hi < lo) throw ContractViolation("annulus_sum: need 1 <= lo <= hi");
  const double sd = std::sqrt(static_cast<double>(Q.disc()));
  const long rows_per_chunk = 8;
  // rows c = 1..hi; c = 0 only carries (0, 1), which lies inside every box
  return chunked_reduce(
      static_cast<long>(hi), cplx(0.0),
      [&](long r0, long r1) {
        cplx acc = 0;
        for (i64 c = r0 + 1; c <= r1; ++c) {
          for (i64 d = -hi; d <= hi; ++d) {
            if (c <= lo && std::abs(d) <= lo) {
              d = lo;  // skip the inner box
              continue;
            }
            i64 x, y;
            if (ext_gcd(d, c, x, y) != 1) continue;
            QuadForm P = apply(UnimodularMatrix{x, -y, c, d}, Q);
            if (P.a == 0) continue;
            i64 den = 2 * P.a;
            double ph = double(mod(i64(m) * P.b, den)) / double(den);
            double R = sd / (2.0 * std::abs(double(P.a)));
            acc += Phi(R) * std::polar(1.0, 2 * kPi * ph);
          }
        }
        return acc;
      },
      mode, rows_per_chunk);
}

std::vector<double> c_terms(long cmax, const std::function<double(long)>& f, ExecMode mode) {
  std::vector<double> out(std::max(0L, cmax));
  for_each_chunk(
      cmax, 256,
      [&](long, long lo, long hi) {
        for (long i = lo; i < hi; ++i) out[i] = f(i + 1);
      },
      mode);
  return out;
}

}  // namespace mocktrace
