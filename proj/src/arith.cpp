#include "mocktrace/arith.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "mocktrace/errors.hpp"

namespace mocktrace {

i64 gcd(i64 a, i64 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    i64 q = a / b;
    i64 t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

i64 mod_inverse(i64 a, i64 m) {
  i64 x, y;
  if (ext_gcd(mod(a, m), m, x, y) != 1)
    throw DomainError("mod_inverse: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
  return mod(x, m);
}

i64 isqrt(i64 n) {
  if (n < 0) throw DomainError("isqrt of negative number");
  i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<i128>(r) * r > n) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(i64 n) {
  if (n < 0) return false;
  i64 r = isqrt(n);
  return r * r == n;
}

bool is_discriminant(i64 d) {
  i64 r = mod(d, 4);
  return r == 0 || r == 1;
}

static bool squarefree(i64 n) {
  for (auto [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

bool is_fundamental(i64 D) {
  if (D == 0) return false;
  if (mod(D, 4) == 1) return squarefree(D);
  if (mod(D, 4) == 0) {
    i64 m = D / 4;
    i64 r = mod(m, 4);
    return (r == 2 || r == 3) && squarefree(m);
  }
  return false;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
  if (n == 0) throw DomainError("factorize(0)");
  n = n < 0 ? -n : n;
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::vector<i64> divisors(i64 n) {
  n = n < 0 ? -n : n;
  std::vector<i64> lo, hi;
  for (i64 k = 1; k * k <= n; ++k) {
    if (n % k) continue;
    lo.push_back(k);
    if (k != n / k) hi.push_back(n / k);
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

int kronecker(i64 D, i64 n) {
  if (n == 0) return (D == 1 || D == -1) ? 1 : 0;
  int res = 1;
  if (n < 0) {
    n = -n;
    if (D < 0) res = -res;
  }
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  if (v > 0) {
    if (D % 2 == 0) return 0;
    i64 r8 = mod(D, 8);
    if ((v & 1) && (r8 == 3 || r8 == 5)) res = -res;
  }
  // Jacobi symbol (D mod n / n), n odd
  i64 a = mod(D, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 r8 = n % 8;
      if (r8 == 3 || r8 == 5) res = -res;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) res = -res;
    a %= n;
  }
  return n == 1 ? res : 0;
}

cplx eps(i64 a) {
  if (a % 2 == 0) throw ContractViolation("eps: argument must be odd");
  return mod(a, 4) == 1 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
}

// Past the brute-force ceiling: for d > 16 every solution of t^2 - d u^2 = 4 with
// gcd(t,u) = 1 has t/u a convergent of sqrt(d), and half of any solution with
// gcd 2 solves x^2 - d y^2 = 1, again a convergent.
static PellSolution pell_by_convergents(i64 d) {
  i64 a0 = isqrt(d);
  i64 P = 0, Q = 1, a = a0;
  i128 p_prev = 1, p = a0, q_prev = 0, q = 1;
  PellSolution best{0, 0, d};
  for (int it = 0; it < 100000; ++it) {
    i128 n = p * p - static_cast<i128>(d) * q * q;
    if (n == 4 && (best.u == 0 || q < best.u)) best = {static_cast<i64>(p), static_cast<i64>(q), d};
    if (n == 1 && (best.u == 0 || 2 * q < best.u)) best = {static_cast<i64>(2 * p), static_cast<i64>(2 * q), d};
    if (best.u != 0 && q >= best.u) return best;
    P = a * Q - P;
    Q = (d - P * P) / Q;
    a = (a0 + P) / Q;
    i128 pn = a * p + p_prev, qn = a * q + q_prev;
    if (pn > static_cast<i128>(INT64_MAX) / 2 || qn > static_cast<i128>(INT64_MAX) / 2) break;
    p_prev = p;
    p = pn;
    q_prev = q;
    q = qn;
  }
  if (best.u != 0) return best;
  throw ConfigError("pell_fundamental: solution exceeds 64-bit range for d = " + std::to_string(d));
}

PellSolution pell_fundamental(i64 d) {
  if (d <= 0 || !is_discriminant(d) || is_square(d))
    throw DomainError("pell_fundamental: need positive nonsquare discriminant, got " + std::to_string(d));
  for (i64 u = 1; u <= kPellCeiling; ++u) {
    i128 n = static_cast<i128>(d) * u * u + 4;
    if (n > static_cast<i128>(INT64_MAX)) break;
    i64 t = isqrt(static_cast<i64>(n));
    if (static_cast<i128>(t) * t == n) return {t, u, d};
  }
  return pell_by_convergents(d);
}

double pell_log_unit(const PellSolution& p) {
  long double s = std::sqrt(static_cast<long double>(p.d));
  return static_cast<double>(std::log((p.t + p.u * s) / 2.0L));
}

double sigma_real(i64 m, double w) {
  if (m < 1) throw DomainError("sigma_real: m must be positive");
  double s = 0.0;
  for (i64 k : divisors(m)) s += std::pow(static_cast<double>(k), w);
  return s;
}

// Lanczos approximation, g = 7, 9 terms
static const double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                   771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

static long double lanczos_sum(long double z) {
  long double a = kLanczos[0];
  for (int k = 1; k < 9; ++k) a += kLanczos[k] / (z + k);
  return a;
}

double gamma_real(double x) {
  if (!(x > 0)) throw DomainError("gamma_real: argument must be positive");
  if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_real(1.0 - x));
  long double z = static_cast<long double>(x) - 1.0L;
  long double t = z + 7.5L;
  return static_cast<double>(std::sqrt(2.0L * kPi) * std::pow(t, z + 0.5L) * std::exp(-t) * lanczos_sum(z));
}

double log_gamma_real(double x) {
  if (!(x > 0)) throw DomainError("log_gamma_real: argument must be positive");
  if (x < 0.5) return std::log(kPi / std::sin(kPi * x)) - log_gamma_real(1.0 - x);
  long double z = static_cast<long double>(x) - 1.0L;
  long double t = z + 7.5L;
  return static_cast<double>(0.5L * std::log(2.0L * kPi) + (z + 0.5L) * std::log(t) - t +
                             std::log(lanczos_sum(z)));
}

// B_{2j}/(2j)! for j = 1..10
static const double kBernoulliOverFact[10] = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0};

double hurwitz_zeta(double s, double a) {
  if (!(s > 1)) throw DomainError("hurwitz_zeta: s must exceed 1");
  if (!(a > 0)) throw DomainError("hurwitz_zeta: a must be positive");
  const int N = 12;
  long double sum = 0;
  for (int k = 0; k < N; ++k) sum += std::pow(static_cast<long double>(k) + a, -static_cast<long double>(s));
  long double x = N + a;
  sum += std::pow(x, 1.0L - s) / (s - 1.0L) + 0.5L * std::pow(x, -static_cast<long double>(s));
  // Euler-Maclaurin correction terms
  long double rising = s;
  long double xp = std::pow(x, -static_cast<long double>(s) - 1.0L);
  for (int j = 0; j < 10; ++j) {
    sum += kBernoulliOverFact[j] * rising * xp;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    xp /= x * x;
  }
  return static_cast<double>(sum);
}

double zeta_real(double s) {
  if (!(s > 1)) throw DomainError("zeta_real: s must exceed 1");
  return hurwitz_zeta(s, 1.0);
}

double kronecker_L(i64 n, double s) {
  if (n == 0) throw DomainError("kronecker_L: n must be nonzero");
  if (!(s > 1)) throw DomainError("kronecker_L: s must exceed 1");
  i64 q = is_discriminant(n) ? (n < 0 ? -n : n) : 4 * (n < 0 ? -n : n);
  if (q == 1) return zeta_real(s);
  double sum = 0.0;
  for (i64 r = 1; r <= q; ++r) {
    int k = kronecker(n, r);
    if (k != 0) sum += k * hurwitz_zeta(s, static_cast<double>(r) / q);
  }
  return sum * std::pow(static_cast<double>(q), -s);
}

double dirichlet_L(i64 D, double s) {
  if (!is_fundamental(D)) throw DomainError("dirichlet_L: D must be a fundamental discriminant");
  return kronecker_L(D, s);
}

// ---- Bessel functions ----

static void check_bessel_args(double nu, double x, const char* who) {
  if (!(x >= 0)) throw DomainError(std::string(who) + ": negative argument");
  if (!(nu >= 0)) throw DomainError(std::string(who) + ": negative order");
}

// sum_k sign^k (x/2)^{nu+2k} / (k! Gamma(nu+k+1))
static long double ascending(double nu, double x, int sign) {
  long double h = 0.5L * x;
  long double term = std::exp(static_cast<long double>(nu) * std::log(h) - log_gamma_real(nu + 1.0));
  long double sum = term;
  long double h2 = h * h;
  for (int k = 1; k < 1000; ++k) {
    term *= sign * h2 / (static_cast<long double>(k) * (static_cast<long double>(nu) + k));
    sum += term;
    if (k > h && std::fabs(term) < 1e-21L * std::fabs(sum)) break;
  }
  return sum;
}

// Hankel expansion: returns P and Q such that J = sqrt(2/(pi x)) (P cos w - Q sin w)
static void hankel_pq(double nu, double x, long double& P, long double& Q) {
  long double mu = 4.0L * nu * nu;
  long double term = 1.0L;
  P = 1.0L;
  Q = 0.0L;
  long double prev = 1e300L;
  for (int k = 1; k < 200; ++k) {
    term *= (mu - static_cast<long double>(2 * k - 1) * (2 * k - 1)) / (8.0L * k * x);
    long double a = std::fabs(term);
    if (a == 0) break;
    if (k > 2 && a > prev) break;  // asymptotic series has started to diverge
    prev = a;
    // term_k carries sign (-1)^{floor(k/2)} between P (even k) and Q (odd k)
    int r = k % 4;
    if (r == 0) P += term;
    if (r == 1) Q += term;
    if (r == 2) P -= term;
    if (r == 3) Q -= term;
    if (a < 1e-19L) break;
  }
}

double bessel_J(double nu, double x) {
  check_bessel_args(nu, x, "bessel_J");
  if (x == 0) return nu == 0 ? 1.0 : 0.0;
  if (x <= kBesselSwitch) return static_cast<double>(ascending(nu, x, -1));
  long double P, Q;
  hankel_pq(nu, x, P, Q);
  long double w = static_cast<long double>(x) - (0.5L * nu + 0.25L) * kPi;
  return static_cast<double>(std::sqrt(2.0L / (kPi * x)) * (P * std::cos(w) - Q * std::sin(w)));
}

static long double i_asymptotic_scaled(double nu, double x) {
  long double mu = 4.0L * nu * nu;
  long double term = 1.0L, sum = 1.0L, prev = 1e300L;
  for (int k = 1; k < 200; ++k) {
    term *= -(mu - static_cast<long double>(2 * k - 1) * (2 * k - 1)) / (8.0L * k * x);
    long double a = std::fabs(term);
    if (a == 0) break;
    if (k > 2 && a > prev) break;
    prev = a;
    sum += term;
    if (a < 1e-19L) break;
  }
  return sum / std::sqrt(2.0L * kPi * x);
}

double bessel_I_scaled(double nu, double x) {
  check_bessel_args(nu, x, "bessel_I_scaled");
  if (x == 0) return nu == 0 ? 1.0 : 0.0;
  if (x <= kBesselSwitch) return static_cast<double>(ascending(nu, x, 1) * std::exp(-static_cast<long double>(x)));
  return static_cast<double>(i_asymptotic_scaled(nu, x));
}

double bessel_I(double nu, double x) {
  check_bessel_args(nu, x, "bessel_I");
  if (x == 0) return nu == 0 ? 1.0 : 0.0;
  if (x <= kBesselSwitch) return static_cast<double>(ascending(nu, x, 1));
  return static_cast<double>(i_asymptotic_scaled(nu, x) * std::exp(static_cast<long double>(x)));
}

}  // namespace mocktrace
