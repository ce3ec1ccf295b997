#include "mocktrace/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mocktrace/errors.hpp"
#include "mocktrace/qform.hpp"

namespace mocktrace {

// ---- square roots modulo M ----

SquareRootTable::SquareRootTable(i64 max_modulus) {
  if (max_modulus < 1) throw ContractViolation("SquareRootTable: max_modulus must be positive");
  spf_.assign(max_modulus + 1, 0);
  for (i64 p = 2; p <= max_modulus; ++p) {
    if (spf_[p]) continue;
    for (i64 q = p; q <= max_modulus; q += p)
      if (!spf_[q]) spf_[q] = static_cast<int>(p);
  }
}

static i64 mulmod(i64 a, i64 b, i64 m) { return static_cast<i64>((__int128)a * b % m); }

static i64 powmod(i64 a, i64 e, i64 m) {
  i64 r = 1 % m;
  a = mod(a, m);
  for (; e > 0; e >>= 1, a = mulmod(a, a, m))
    if (e & 1) r = mulmod(r, a, m);
  return r;
}

// a root of n mod an odd prime p not dividing n, or -1
static i64 tonelli_shanks(i64 n, i64 p) {
  n = mod(n, p);
  if (powmod(n, (p - 1) / 2, p) != 1) return -1;
  i64 q = p - 1, e = 0;
  while (q % 2 == 0) q /= 2, ++e;
  i64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  i64 x = powmod(n, (q + 1) / 2, p), b = powmod(n, q, p), g = powmod(z, q, p);
  while (b != 1) {
    i64 r = 0, t = b;
    while (t != 1) t = mulmod(t, t, p), ++r;
    i64 h = g;
    for (i64 k = 0; k < e - r - 1; ++k) h = mulmod(h, h, p);
    x = mulmod(x, h, p);
    g = mulmod(h, h, p);
    b = mulmod(b, g, p);
    e = r;
  }
  return x;
}

// roots of n modulo p^k
static void prime_power_roots(i64 n, i64 p, int k, std::vector<i64>& out) {
  out.clear();
  i64 pk = 1;
  for (int j = 0; j < k; ++j) pk *= p;
  if (p != 2 && mod(n, p) != 0) {
    i64 r = tonelli_shanks(n, p);
    if (r < 0) return;
    i64 pj = p;
    for (int j = 1; j < k; ++j) {
      pj *= p;  // Newton step modulo p^{j+1}
      i64 f = mod(mulmod(r, r, pj) - mod(n, pj), pj);
      r = mod(r - mulmod(f, mod_inverse(mod(2 * r, pj), pj), pj), pj);
    }
    out.push_back(r);
    if (pk - r != r) out.push_back(pk - r);
    std::sort(out.begin(), out.end());
    return;
  }
  // p | 2n: lift digit by digit
  std::vector<i64> cur, next;
  for (i64 x = 0; x < p; ++x)
    if (mod(x * x - n, p) == 0) cur.push_back(x);
  i64 pj = p;
  for (int j = 1; j < k; ++j) {
    next.clear();
    i64 pj1 = pj * p;
    for (i64 r : cur)
      for (i64 t = 0; t < p; ++t) {
        i64 x = r + t * pj;
        if (mod(mulmod(x, x, pj1) - mod(n, pj1), pj1) == 0) next.push_back(x);
      }
    cur.swap(next);
    pj = pj1;
  }
  out = cur;
  std::sort(out.begin(), out.end());
}

void SquareRootTable::roots(i64 n, i64 M, std::vector<i64>& out) const {
  if (M < 1 || M > max_modulus()) throw ContractViolation("SquareRootTable: modulus outside the sieve");
  if (n <= 0) throw ContractViolation("SquareRootTable: n must be positive");
  out.assign(1, 0);
  i64 cur_mod = 1, rest = M;
  std::vector<i64> local, merged;
  while (rest > 1) {
    i64 p = spf_[rest];
    int k = 0;
    i64 pk = 1;
    while (rest % p == 0) rest /= p, pk *= p, ++k;
    prime_power_roots(n, p, k, local);
    if (local.empty()) {
      out.clear();
      return;
    }
    // x = a mod cur_mod, b mod pk
    i64 inv = mod_inverse(mod(cur_mod, pk), pk);
    merged.clear();
    for (i64 a : out)
      for (i64 b : local) merged.push_back(a + cur_mod * mulmod(mod(b - a, pk), inv, pk));
    out.swap(merged);
    cur_mod *= pk;
  }
  if (M == 1) out.assign(1, 0);
  std::sort(out.begin(), out.end());
}

std::vector<i64> SquareRootTable::roots(i64 n, i64 M) const {
  std::vector<i64> out;
  roots(n, M, out);
  return out;
}

// ---- Kloosterman sums ----

static void check_modulus(i64 modulus) {
  if (modulus <= 0 || modulus % 4 != 0) throw DomainError("Kloosterman sum: modulus must be 4c with c >= 1");
}

double kloosterman_plus(i64 d, i64 D, i64 modulus) {
  check_modulus(modulus);
  const i64 M = modulus, c = M / 4;
  cplx sum = 0;
  for (i64 a = 1; a < M; a += 2) {
    if (gcd(a, c) != 1) continue;
    i64 ab = mod_inverse(a, M);
    i64 ph = mod(mulmod(mod(d, M), a, M) + mulmod(mod(D, M), ab, M), M);
    cplx term = double(kronecker(M, a)) * eps(a) * std::polar(1.0, 2 * kPi * double(ph) / double(M));
    sum += term;
  }
  sum *= cplx(1, -1) * (c % 2 == 0 ? 1.0 : 2.0);
  if (std::abs(sum.imag()) > kRealResidueTol)
    throw InternalError("kloosterman_plus: imaginary residue " + std::to_string(sum.imag()));
  return sum.real();
}

// 2 sqrt(c) S_1(d, D; 4c) = K+(d, D; 4c) for D fundamental; chi is trivial for D = 1
static double kplus_from_roots(i64 d, i64 D, i64 c, const SquareRootTable& rt, std::vector<i64>& buf) {
  const i64 n = d * D, M = 4 * c;
  rt.roots(n, M, buf);
  double s = 0;
  for (i64 b : buf) {
    int chi = 1;
    if (D != 1) chi = chi_D(D, QuadForm{c, b, (b * b - n) / M});
    if (chi != 0) s += chi * std::cos(kPi * double(b) / double(c));
  }
  return 2 * std::sqrt(double(c)) * s;
}

inline constexpr i64 kDirectTableCeiling = 20000;

std::vector<double> kloosterman_plus_table(i64 d, i64 D, i64 c_max, ExecMode mode) {
  if (c_max < 1) throw ContractViolation("kloosterman_plus_table: c_max must be positive");
  if (d * D > 0) {
    // K+ is symmetric, so put the trivial or fundamental twist second
    i64 a = d, b = D;
    if (a == 1 || (b != 1 && !is_fundamental(b))) std::swap(a, b);
    if (b == 1 || is_fundamental(b)) {
      SquareRootTable rt(4 * c_max);
      std::vector<double> out(c_max);
      for_each_chunk(
          c_max, 256,
          [&](long, long lo, long hi) {
            std::vector<i64> buf;
            for (long i = lo; i < hi; ++i) out[i] = kplus_from_roots(a, b, i + 1, rt, buf);
          },
          mode);
      return out;
    }
  }
  if (c_max > kDirectTableCeiling)
    throw ConfigError("kloosterman_plus_table: direct evaluation limited to c_max <= 20000 for this pair");
  return c_terms(c_max, [&](long c) { return kloosterman_plus(d, D, 4 * c); }, mode);
}

static void check_square_pair(i64 d, i64 D, const char* who) {
  if (d <= 0 || D <= 0 || !is_square(d * D)) throw DomainError(std::string(who) + ": dD must be a positive square");
  if (!is_fundamental(D)) throw DomainError(std::string(who) + ": D must be fundamental");
}

static cplx s_m_complex(int m, i64 n, i64 D, i64 c, const std::vector<i64>& roots) {
  cplx s = 0;
  for (i64 b : roots) {
    int chi = D == 1 ? 1 : chi_D(D, QuadForm{c, b, (b * b - n) / (4 * c)});
    if (chi == 0) continue;
    i64 ph = mod(i64(m) * b, 2 * c);
    s += double(chi) * std::polar(1.0, kPi * double(ph) / double(c));
  }
  return s;
}

double s_m_sum(int m, i64 d, i64 D, i64 modulus) {
  check_modulus(modulus);
  check_square_pair(d, D, "s_m_sum");
  if (m < 0) throw DomainError("s_m_sum: m must be nonnegative");
  const i64 n = d * D, M = modulus, c = M / 4;
  std::vector<i64> roots;
  for (i64 b = 0; b < M; ++b)
    if (mod(b * b - n, M) == 0) roots.push_back(b);
  cplx s = s_m_complex(m, n, D, c, roots);
  if (std::abs(s.imag()) > kRealResidueTol) throw InternalError("s_m_sum: imaginary residue");
  return s.real();
}

// ---- b(d, D, s) ----

static void check_b_args(double s, i64 c_max) {
  if (!(s > 0.75)) throw DomainError("b series: s must exceed 3/4");
  if (c_max < 100) throw ContractViolation("b series: c_max must be >= 100");
}

static double spread_last_decade(const std::vector<double>& partial) {
  size_t lo = partial.size() / 10;
  auto [mn, mx] = std::minmax_element(partial.begin() + lo, partial.end());
  return *mx - *mn;
}

static double j_prefactor(i64 n) { return std::pow(2.0, -1.5) * kPi * std::pow(double(n), 0.25); }

SeriesValue b_series(i64 d, i64 D, double s, i64 c_max, ExecMode mode) {
  check_b_args(s, c_max);
  if (d * D < 0) throw DomainError("b_series: dD must be nonnegative");
  std::vector<double> terms;
  if (d * D > 0) {
    const i64 n = d * D;
    std::vector<double> K = kloosterman_plus_table(d, D, c_max, mode);
    const double pre = j_prefactor(n), B = kPi * std::sqrt(double(n));
    terms = c_terms(c_max, [&](long c) { return K[c - 1] * pre / c * bessel_J(2 * s - 1, B / c); }, mode);
  } else {
    if (c_max > kDirectTableCeiling) throw ConfigError("b_series: c_max above 20000 for a zero argument");
    const double pre = d + D != 0 ? std::pow(2.0, -4 * s) * std::pow(kPi, s + 0.25) * std::pow(double(d + D), s - 0.25)
                                  : std::pow(2.0, 0.5 - 6 * s) * std::sqrt(kPi) * gamma_real(2 * s);
    terms = c_terms(c_max, [&](long c) { return kloosterman_plus(d, D, 4 * c) * pre * std::pow(double(c), -2 * s); },
                    mode);
  }
  std::vector<double> partial(terms.size());
  std::partial_sum(terms.begin(), terms.end(), partial.begin());
  return {partial.back(), c_max, s, spread_last_decade(partial)};
}

// Dirichlet series Z(n, sigma) = sum_c K+(0, n; 4c) c^{-sigma - 1/2}
static double z_zero(i64 n, double sigma) {
  if (n == 0) return 4 * zeta_real(2 * sigma - 1) / zeta_real(2 * sigma);
  double val = 4 * kronecker_L(n, sigma) / zeta_real(2 * sigma);
  for (auto [p, e] : factorize(2 * n)) {
    (void)e;
    int kmax = 2 * static_cast<int>(std::floor(std::log(4.0 * n) / std::log(double(p)) + 1e-12)) + 4;
    double x = std::pow(double(p), -sigma), Lp = 1, xk = 1;
    i64 pk = 1;
    for (int k = 1; k <= kmax; ++k) {
      pk *= p;
      xk *= x;
      Lp += kloosterman_plus(0, n, 4 * pk) / (4 * std::sqrt(double(pk))) * xk;
    }
    val *= Lp * (1 - kronecker(n, p) * x) / (1 - x * x);
  }
  return val;
}

static double b_zero_prefactor(i64 n, double s) {
  return n == 0 ? std::pow(2.0, 0.5 - 6 * s) * std::sqrt(kPi) * gamma_real(2 * s)
                : std::pow(2.0, -4 * s) * std::pow(kPi, s + 0.25) * std::pow(double(n), s - 0.25);
}

double b_zero(i64 n, double s) {
  if (n < 0) throw DomainError("b_zero: n must be nonnegative");
  if (!(s > 0.75)) throw DomainError("b_zero: s must exceed 3/4");
  return b_zero_prefactor(n, s) * z_zero(n, 2 * s - 0.5);
}

double b_zero_residue(i64 n) {
  if (n < 0) throw DomainError("b_zero_residue: n must be nonnegative");
  if (n == 0) return 3 / (16 * kPi);
  if (!is_square(n)) return 0;
  // L(sigma, (n/.)) = zeta(sigma) prod_{p | n} (1 - p^{-sigma}); sigma - 1 = 2 (s - 3/4)
  double res = 4 / zeta_real(2);
  for (auto [p, e] : factorize(n)) {
    (void)e;
    res *= 1 - 1.0 / p;
  }
  for (auto [p, e] : factorize(2 * n)) {
    (void)e;
    int kmax = 2 * static_cast<int>(std::floor(std::log(4.0 * n) / std::log(double(p)) + 1e-12)) + 4;
    double x = 1.0 / p, Lp = 1, xk = 1;
    i64 pk = 1;
    for (int k = 1; k <= kmax; ++k) {
      pk *= p;
      xk *= x;
      Lp += kloosterman_plus(0, n, 4 * pk) / (4 * std::sqrt(double(pk))) * xk;
    }
    res *= Lp * (1 - kronecker(n, p) * x) / (1 - x * x);
  }
  return b_zero_prefactor(n, 0.75) * res / 2;
}

// int_X^inf t^{-1/2} J_nu(B / t) dt for nu > 1/2, termwise from the ascending series
static double j_tail(double nu, double B, double X) {
  double U = B / X, sum = 0;
  for (int k = 0; k < 10; ++k) {
    double e = nu + 2 * k - 0.5;
    double lc = -log_gamma_real(k + 1.0) - log_gamma_real(nu + k + 1) - (nu + 2 * k) * std::log(2.0);
    sum += (k % 2 ? -1 : 1) * std::exp(lc + e * std::log(U)) / e;
  }
  return std::sqrt(B) * sum;
}

static double cesaro(const std::vector<double>& completed, i64 lo, i64 hi) {
  double s = 0;
  for (i64 X = lo; X <= hi; ++X) s += completed[X - 1];
  return s / double(hi - lo + 1);
}

SeriesValue b_smoothed(i64 d, i64 D, double s, i64 c_max, const std::vector<double>& table) {
  check_b_args(s, c_max);
  if (d * D <= 0) throw DomainError("b_smoothed: dD must be positive");
  if (static_cast<i64>(table.size()) < c_max) throw ContractViolation("b_smoothed: Kloosterman table too short");
  const i64 n = d * D;
  const double pre = j_prefactor(n), B = kPi * std::sqrt(double(n)), nu = 2 * s - 1;
  // K+(d, D; 4c) ~ kappa sqrt(c) on average; kappa matches the pole of b(d, D, s) at 3/4
  const double A = pre * std::pow(B / 2, 0.5) / gamma_real(1.5);
  const double kappa = 2 * b_zero_residue(d) * b_zero_residue(D) / b_zero_residue(0) / A;
  std::vector<double> completed(c_max);
  double P = 0;
  for (i64 c = 1; c <= c_max; ++c) {
    P += table[c - 1] * pre / double(c) * bessel_J(nu, B / double(c));
    completed[c - 1] = P + (kappa != 0 ? kappa * pre * j_tail(nu, B, c + 0.5) : 0.0);
  }
  double v = cesaro(completed, c_max / 10, c_max), w = cesaro(completed, c_max / 20, c_max / 2);
  return {v, c_max, s, std::abs(v - w)};
}

// Neville evaluation at 0 of the interpolant through (x_i, y_i); w receives the weights
static double extrapolate_zero(const std::vector<double>& x, const std::vector<double>& y, std::vector<double>& w) {
  const size_t k = x.size();
  w.assign(k, 1.0);
  double v = 0;
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j)
      if (j != i) w[i] *= x[j] / (x[j] - x[i]);
    v += w[i] * y[i];
  }
  return v;
}

CoeffValue coeff_a(i64 d, i64 D, const CoeffOptions& opt) {
  if (d <= 0 || D <= 0 || !is_discriminant(d) || !is_discriminant(D))
    throw DomainError("coeff_a: d and D must be positive discriminants");
  if (opt.deltas.size() < 2 || opt.deltas.size() != opt.c_max.size())
    throw ContractViolation("coeff_a: need at least two deltas and one c_max per delta");
  for (double dl : opt.deltas)
    if (!(dl > 0)) throw DomainError("coeff_a: deltas must be positive");
  const i64 top = *std::max_element(opt.c_max.begin(), opt.c_max.end());
  const std::vector<double> K = kloosterman_plus_table(d, D, top, opt.mode);
  const double root = std::sqrt(double(d * D));
  CoeffValue out;
  out.deltas = opt.deltas;
  for (size_t i = 0; i < opt.deltas.size(); ++i) {
    double s = 0.75 + opt.deltas[i];
    SeriesValue b = b_smoothed(d, D, s, opt.c_max[i], K);
    double sub = b_zero(d, s) * b_zero(D, s) / b_zero(0, s);
    out.F.push_back((b.value - sub) / root);
    out.F_err.push_back(b.tail_estimate / root);
  }
  std::vector<double> w, w_sub;
  double all = extrapolate_zero(out.deltas, out.F, w);
  std::vector<double> xs(out.deltas.begin() + 1, out.deltas.end()), ys(out.F.begin() + 1, out.F.end());
  double sub = extrapolate_zero(xs, ys, w_sub);
  double prop = 0;
  for (size_t i = 0; i < w.size(); ++i) prop += std::abs(w[i]) * out.F_err[i];
  out.extrapolation_err = std::abs(all - sub);
  out.series = {all, top, 0.75, out.extrapolation_err + prop};
  return out;
}

// ---- Poincare-series pairing and the divisor sum ----

SeriesValue prop1_rhs(i64 d, i64 D, int m, double s, i64 c_max, ExecMode mode) {
  check_square_pair(d, D, "prop1_rhs");
  if (m < 0) throw DomainError("prop1_rhs: m must be nonnegative");
  if (!(s > 1)) throw DomainError("prop1_rhs: s must exceed 1");
  if (c_max < 100) throw ContractViolation("prop1_rhs: c_max must be >= 100");
  const i64 n = d * D;
  SquareRootTable rt(4 * c_max);
  std::vector<double> S(c_max);
  for_each_chunk(
      c_max, 256,
      [&](long, long lo, long hi) {
        std::vector<i64> buf;
        for (long i = lo; i < hi; ++i) {
          rt.roots(n, 4 * (i + 1), buf);
          cplx v = s_m_complex(m, n, D, i + 1, buf);
          if (std::abs(v.imag()) > kRealResidueTol) throw InternalError("prop1_rhs: imaginary residue in S_m");
          S[i] = v.real();
        }
      },
      mode);
  const double B = kPi * m * std::sqrt(double(n)), nu = s - 0.5;
  auto term = [&](i64 c) {
    return m == 0 ? S[c - 1] * std::pow(double(c), -s) : S[c - 1] / std::sqrt(double(c)) * bessel_J(nu, B / double(c));
  };
  auto completed = [&](i64 X) {
    double P = 0, mean = 0;
    for (i64 c = 1; c <= X; ++c) P += term(c);
    for (i64 c = X / 2 + 1; c <= X; ++c) mean += S[c - 1];
    mean /= double(X - X / 2);
    double xt = X + 0.5;
    P += m == 0 ? mean * std::pow(xt, 1 - s) / (s - 1) : mean * j_tail(nu, B, xt);
    return P;
  };
  const double pre = m == 0 ? std::pow(2.0, -s - 1) * std::pow(double(n), s / 2)
                            : kPi / std::sqrt(2.0) * std::sqrt(double(m)) * std::pow(double(n), 0.25);
  double v = pre * completed(c_max), dev = 0;
  for (i64 X : {c_max / 2, c_max / 4, c_max / 8}) dev = std::max(dev, std::abs(v - pre * completed(X)));
  return {v, c_max, s, dev};
}

SeriesValue thm2_rhs(i64 d, i64 D, int m, const CoeffOptions& opt) {
  if (d <= 0 || D <= 0 || !is_discriminant(d)) throw DomainError("thm2_rhs: d and D must be positive discriminants");
  if (!is_fundamental(D)) throw DomainError("thm2_rhs: D must be fundamental");
  if (m < 1) throw DomainError("thm2_rhs: m must be positive");
  SeriesValue out;
  out.s = 0.75;
  for (i64 k : divisors(m)) {
    int kr = kronecker(D, m / k);
    if (kr == 0) continue;
    CoeffValue a = coeff_a(k * k * D, d, opt);
    out.value += kr * double(k) * a.series.value;
    out.tail_estimate += double(k) * a.series.tail_estimate;
    out.c_max = std::max(out.c_max, a.series.c_max);
  }
  return out;
}

}  // namespace mocktrace
