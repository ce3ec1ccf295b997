#include "mocktrace/modfun.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "mocktrace/errors.hpp"

namespace mocktrace {

using ld = __float128;  // the Faber recursion cancels ~10 digits at m = 10
using Series = std::vector<ld>;

static Series mul(const Series& a, const Series& b, size_t len) {
  Series r(len, ld(0));
  for (size_t i = 0; i < a.size() && i < len; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size() && i + j < len; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// a / b for b[0] = 1
static Series div(const Series& a, const Series& b, size_t len) {
  Series r(len, ld(0));
  for (size_t n = 0; n < len; ++n) {
    ld s = n < a.size() ? a[n] : ld(0);
    for (size_t k = 1; k <= n && k < b.size(); ++k) s -= b[k] * r[n - k];
    r[n] = s;
  }
  return r;
}

// coefficients of j through q^N (index n + 1 holds c(n))
static Series j_series(int N) {
  size_t len = N + 2;
  Series e4(len, ld(0));
  e4[0] = 1;
  for (size_t n = 1; n < len; ++n) e4[n] = 240 * static_cast<ld>(static_cast<i64>(sigma_real(static_cast<i64>(n), 3)));
  Series eta(len, ld(0));  // prod (1 - q^n) by the pentagonal number theorem
  for (i64 k = -static_cast<i64>(len); k <= static_cast<i64>(len); ++k) {
    i64 e = k * (3 * k - 1) / 2;
    if (e >= 0 && e < static_cast<i64>(len)) eta[e] += (k % 2 == 0) ? 1 : -1;
  }
  Series p2 = mul(eta, eta, len), p4 = mul(p2, p2, len), p8 = mul(p4, p4, len), p16 = mul(p8, p8, len);
  Series p24 = mul(p16, p8, len);
  Series e43 = mul(mul(e4, e4, len), e4, len);
  return div(e43, p24, len);
}

static void check_N(int N) {
  if (N < 1 || N > kMaxSeriesN) throw ConfigError("series length N = " + std::to_string(N) + " outside [1, 64]");
}

QExpansion j_coeffs(int N) {
  check_N(N);
  Series s = j_series(N);
  QExpansion out;
  out.lead = -1;
  for (auto v : s) out.coeffs.push_back(static_cast<double>(v));
  return out;
}

// j_0..j_m in quad precision; entry k has lead -k and is valid through q^{N + m - k}
static std::vector<Series> faber_family(int m, int N) {
  const int L = N + m;
  std::vector<Series> fam(m + 1);
  fam[0].assign(1, ld(1));
  if (m == 0) return fam;
  Series j = j_series(L);  // index n + 1 holds c(n)
  j[1] = 0;                // j_1 = j - 744
  fam[1] = j;
  for (int k = 2; k <= m; ++k) {
    const int top = N + m - k;
    const Series& prev = fam[k - 1];
    Series r(top + k + 1, ld(0));  // exponents -k .. top
    for (size_t a = 0; a < j.size(); ++a)
      for (size_t b = 0; b < prev.size(); ++b) {
        i64 e = (static_cast<i64>(a) - 1) + (static_cast<i64>(b) - (k - 1));
        if (e > top) break;
        r[e + k] += j[a] * prev[b];
      }
    // cancel q^i for -(k-1) <= i <= 0, highest pole first
    for (int i = k - 1; i >= 0; --i) {
      ld alpha = r[k - i];
      if (alpha == 0) continue;
      const Series& ji = fam[i];
      for (size_t t = 0; t < ji.size(); ++t) {
        i64 e = static_cast<i64>(t) - i;
        if (e > top) break;
        r[e + k] -= alpha * ji[t];
      }
    }
    r[0] = 1;
    for (int i = 1; i <= k; ++i) r[i] = 0;  // exact by construction of the basis
    fam[k] = r;
  }
  return fam;
}

QExpansion jm_coeffs(int m, int N) {
  if (m < 0 || m > kMaxM) throw ConfigError("jm_coeffs: m = " + std::to_string(m) + " outside [0, 10]");
  check_N(N);
  Series s = faber_family(m, N)[m];
  if (m == 0) s.assign(N + 1, ld(0)), s[0] = 1;
  QExpansion out;
  out.lead = -m;
  for (int k = 0; k <= N + m; ++k) out.coeffs.push_back(static_cast<double>(s[k]));
  return out;
}

bool jm_expansion_valid(int m, const QExpansion& e) {
  if (e.lead != -m || e.last() < 1 || e.last() > kMaxSeriesN) return false;
  if (e.coeff(-m) != 1.0) return false;
  for (int k = -m + 1; k <= 0; ++k)
    if (e.coeff(k) != 0.0) return false;
  for (double v : e.coeffs)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {
struct Table {
  std::mutex mu;
  std::map<int, std::unique_ptr<QExpansion>> entries;
};
Table& table() {
  static Table t;
  return t;
}
}  // namespace

const QExpansion& jm_table(int m) {
  if (m < 0 || m > kMaxM) throw ConfigError("jm_table: m = " + std::to_string(m) + " outside [0, 10]");
  Table& t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.entries.find(m);
  if (it == t.entries.end()) it = t.entries.emplace(m, std::make_unique<QExpansion>(jm_coeffs(m, kDefaultN))).first;
  return *it->second;
}

void jm_table_install(int m, const QExpansion& e) {
  if (!jm_expansion_valid(m, e)) throw ConfigError("jm_table_install: invalid expansion for m = " + std::to_string(m));
  Table& t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.entries.find(m);
  if (it == t.entries.end())
    t.entries.emplace(m, std::make_unique<QExpansion>(e));
  else
    *it->second = e;  // the old object stays at the same address
}

std::pair<cplx, UnimodularMatrix> reduce_to_fundamental(cplx tau) {
  if (!(tau.imag() > 0)) throw DomainError("reduce_to_fundamental: Im(tau) must be positive");
  UnimodularMatrix g;
  const UnimodularMatrix S{0, -1, 1, 0};
  for (int it = 0; it < 10000; ++it) {
    double k = std::round(tau.real());
    if (k != 0) {
      tau -= k;
      g = UnimodularMatrix{1, -static_cast<i64>(k), 0, 1} * g;
    }
    if (std::norm(tau) < 1.0 - 1e-13) {
      double before = tau.imag();
      tau = -1.0 / tau;
      g = S * g;
      if (!(tau.imag() > before)) throw InternalError("reduce_to_fundamental: no progress");
      continue;
    }
    return {tau, g};
  }
  throw InternalError("reduce_to_fundamental: iteration cap reached");
}

static cplx series_positive(const QExpansion& e, cplx q) {
  cplx s = 0;
  for (int n = e.last(); n >= 1; --n) s = (s + e.coeff(n)) * q;
  return s;
}

static cplx e_of(double x) {
  double f = x - std::floor(x);
  return std::polar(1.0, 2 * kPi * f);
}

cplx jm_tail_at(int m, cplx w) {
  const QExpansion& e = jm_table(m);
  cplx q = std::exp(-2 * kPi * w.imag()) * e_of(w.real());
  return series_positive(e, q);
}

cplx eval_jm(int m, cplx tau) {
  if (m == 0) {
    if (!(tau.imag() > 0)) throw DomainError("eval_jm: Im(tau) must be positive");
    return 1.0;
  }
  auto [t, g] = reduce_to_fundamental(tau);
  (void)g;
  const QExpansion& e = jm_table(m);
  cplx q = std::exp(-2 * kPi * t.imag()) * e_of(t.real());
  cplx lead = std::exp(2 * kPi * m * t.imag()) * e_of(-m * t.real());
  return lead + series_positive(e, q);
}

CuspMatrix cusp_matrix(i64 r, i64 s) {
  if (gcd(r, s) != 1) throw DomainError("cusp_matrix: r and s must be coprime");
  // bottom row (C, D) = (s, -r); need A D - B C = 1
  i64 C = s, D = -r;
  i64 x, y;
  ext_gcd(D, C, x, y);  // D x + C y = 1, so A = x, B = -y
  i64 A = x, B = -y;
  if (C != 0) {
    i64 ac = C < 0 ? -C : C;
    i64 k = A >= 0 ? A / ac : -((-A + ac - 1) / ac);
    i64 sg = C < 0 ? -1 : 1;
    // (A, B) -> (A, B) - k sg (C, D) keeps the determinant
    A -= k * sg * C;
    B -= k * sg * D;
  } else {
    B = 0;
  }
  CuspMatrix cm;
  cm.alpha_num = r;
  cm.alpha_den = s;
  cm.gamma = {A, B, C, D};
  if (cm.gamma.det() != 1) throw InternalError("cusp_matrix: bad completion");
  return cm;
}

std::array<CuspMatrix, 2> root_cusp_matrices(const QuadForm& Q) {
  auto roots = square_roots(Q);
  return {cusp_matrix(roots[0].r, roots[0].s), cusp_matrix(roots[1].r, roots[1].s)};
}

// 2 sinh(2 pi m v) e(sign m u)
static cplx cusp_term(int m, cplx w, int sign) {
  return 2.0 * std::sinh(2 * kPi * m * w.imag()) * e_of(sign * m * w.real());
}

cplx eval_jmQ(int m, const QuadForm& Q, cplx tau, const JmQOptions& opt) {
  if (m < 1 || m > kMaxM) throw DomainError("eval_jmQ: m must be in [1, 10]");
  if (!(tau.imag() > 0)) throw DomainError("eval_jmQ: Im(tau) must be positive");
  auto cm = root_cusp_matrices(Q);
  cplx w[2] = {cm[0].gamma.act(tau), cm[1].gamma.act(tau)};
  int big = w[0].imag() >= w[1].imag() ? 0 : 1;
  if (w[big].imag() <= opt.v_star) return eval_jm(m, tau) - cusp_term(m, w[0], opt.phase_sign) - cusp_term(m, w[1], opt.phase_sign);
  // j_m(tau) = j_m(w) = e^{2 pi m v} e(-m u) + tail(w); group it with the cusp term of the same root
  const cplx& z = w[big];
  double v = z.imag(), u = z.real();
  cplx grouped;
  if (opt.phase_sign < 0)
    grouped = std::exp(-2 * kPi * m * v) * e_of(-m * u);
  else
    grouped = std::exp(2 * kPi * m * v) * (e_of(-m * u) - e_of(m * u)) + std::exp(-2 * kPi * m * v) * e_of(m * u);
  return grouped + jm_tail_at(m, z) - cusp_term(m, w[1 - big], opt.phase_sign);
}

}  // namespace mocktrace
