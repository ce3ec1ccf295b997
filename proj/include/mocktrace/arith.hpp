#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace mocktrace {

using i64 = std::int64_t;
using i128 = __int128;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// ---- integer helpers ----
i64 gcd(i64 a, i64 b);
i64 mod(i64 a, i64 m);  // representative in [0, m)
// returns g = gcd(a,b) >= 0 and x, y with a*x + b*y = g
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);
i64 mod_inverse(i64 a, i64 m);  // throws DomainError if not invertible
i64 isqrt(i64 n);               // floor(sqrt(n)) for n >= 0
bool is_square(i64 n);
bool is_discriminant(i64 d);  // d = 0,1 mod 4
bool is_fundamental(i64 D);   // 1 counts as fundamental
std::vector<std::pair<i64, int>> factorize(i64 n);  // |n| >= 1
std::vector<i64> divisors(i64 n);                  // positive divisors, ascending

// ---- characters ----
int kronecker(i64 D, i64 n);
cplx eps(i64 a);  // 1 for a = 1 mod 4, i for a = 3 mod 4

// t^2 - d u^2 = 4 with (t, u) minimal, u searched up to kPellCeiling
struct PellSolution {
  i64 t = 0;
  i64 u = 0;
  i64 d = 0;
};
inline constexpr i64 kPellCeiling = 1000000;
PellSolution pell_fundamental(i64 d);
double pell_log_unit(const PellSolution& p);  // log((t + u sqrt d)/2)

double sigma_real(i64 m, double w);

// ---- real special functions ----
double gamma_real(double x);
double log_gamma_real(double x);
double zeta_real(double s);
double hurwitz_zeta(double s, double a);
// L(s, (n/.)) for any nonzero discriminant n; dirichlet_L requires n fundamental
double kronecker_L(i64 n, double s);
double dirichlet_L(i64 D, double s);

// switchover between ascending series and large-argument expansions
inline constexpr double kBesselSwitch = 20.0;
double bessel_J(double nu, double x);
double bessel_I(double nu, double x);
double bessel_I_scaled(double nu, double x);  // exp(-x) I_nu(x)

}  // namespace mocktrace
