#include "mocktrace/qform.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mocktrace/errors.hpp"

namespace mocktrace {

std::string QuadForm::str() const {
  return "[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]";
}

std::string UnimodularMatrix::str() const {
  return "[[" + std::to_string(A) + "," + std::to_string(B) + "],[" + std::to_string(C) + "," + std::to_string(D) +
         "]]";
}

QuadForm apply(const UnimodularMatrix& g, const QuadForm& Q) {
  if (g.det() != 1) throw ContractViolation("apply: matrix " + g.str() + " is not unimodular");
  const i64 A = g.A, B = g.B, C = g.C, D = g.D;
  QuadForm r;
  r.a = Q.a * D * D - Q.b * D * C + Q.c * C * C;
  r.b = -2 * Q.a * B * D + Q.b * (A * D + B * C) - 2 * Q.c * A * C;
  r.c = Q.a * B * B - Q.b * A * B + Q.c * A * A;
  return r;
}

static i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

ClassList classes_negative(i64 d) {
  if (d >= 0 || !is_discriminant(d)) throw DomainError("classes_negative: need negative discriminant, got " + std::to_string(d));
  ClassList out;
  out.discriminant = d;
  for (i64 a = 1; 3 * a * a <= -d; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      i64 num = b * b - d;
      if (num % (4 * a) != 0) continue;
      i64 c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      out.reps.push_back({a, b, c});
      out.stab_orders.push_back((a == b && b == c) ? 3 : (b == 0 && a == c) ? 2 : 1);
    }
  }
  return out;
}

std::pair<QuadForm, UnimodularMatrix> reduce_definite(const QuadForm& Q) {
  if (Q.disc() >= 0 || Q.a <= 0) throw DomainError("reduce_definite: need a positive definite form");
  QuadForm q = Q;
  UnimodularMatrix g;
  const UnimodularMatrix S{0, -1, 1, 0};
  for (int it = 0; it < 10000; ++it) {
    // translate b into (-a, a]
    i64 k = -floor_div(q.a - q.b, 2 * q.a);
    if (k != 0) {
      UnimodularMatrix T{1, k, 0, 1};
      q = apply(T, q);
      g = T * g;
    }
    if (q.c < q.a || (q.c == q.a && q.b < 0)) {
      q = apply(S, q);
      g = S * g;
      continue;
    }
    return {q, g};
  }
  throw InternalError("reduce_definite did not terminate");
}

bool is_reduced_indefinite(const QuadForm& Q) {
  i64 d = Q.disc();
  if (d <= 0 || is_square(d) || Q.a == 0) return false;
  i64 b = Q.b, a2 = 2 * (Q.a < 0 ? -Q.a : Q.a);
  if (b <= 0 || b * b >= d) return false;
  // sqrt(d) - b < 2|a| < sqrt(d) + b
  bool lower = (a2 + b) * (a2 + b) > d;
  bool upper = a2 < b || (a2 - b) * (a2 - b) < d;
  return lower && upper;
}

std::pair<QuadForm, UnimodularMatrix> rho_step(const QuadForm& Q) {
  i64 d = Q.disc();
  i64 c = Q.c;
  if (c == 0) throw DomainError("rho_step: c = 0");
  i64 ac = c < 0 ? -c : c;
  i64 s = isqrt(d);
  i64 bp;
  if (static_cast<i128>(ac) * ac > d) {
    // -|c| < b' <= |c|
    bp = mod(-Q.b, 2 * ac);
    if (bp > ac) bp -= 2 * ac;
  } else {
    // sqrt(d) - 2|c| < b' < sqrt(d); d nonsquare so floor(sqrt d) < sqrt d
    bp = s - mod(s + Q.b, 2 * ac);
  }
  i64 k = (bp + Q.b) / (2 * c);
  UnimodularMatrix g{k, 1, -1, 0};
  return {apply(g, Q), g};
}

ClassList classes_nonsquare(i64 d) {
  if (d <= 0 || !is_discriminant(d) || is_square(d))
    throw DomainError("classes_nonsquare: need positive nonsquare discriminant, got " + std::to_string(d));
  std::vector<QuadForm> reduced;
  i64 s = isqrt(d);
  for (i64 b = 1; b <= s; ++b) {
    if ((b - d) % 2 != 0) continue;
    i64 num = (b * b - d) / 4;  // = a c
    for (i64 a2 = 1; a2 <= s + b; ++a2) {
      i64 a = (a2 % 2 == 0) ? a2 / 2 : 0;
      if (a == 0) continue;
      for (i64 sa : {a, -a}) {
        if (num % sa != 0) continue;
        QuadForm q{sa, b, num / sa};
        if (is_reduced_indefinite(q)) reduced.push_back(q);
      }
    }
  }
  std::sort(reduced.begin(), reduced.end());
  reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());
  std::set<QuadForm> seen;
  ClassList out;
  out.discriminant = d;
  for (const auto& q : reduced) {
    if (seen.count(q)) continue;
    out.reps.push_back(q);
    QuadForm cur = q;
    for (int it = 0; it < 100000; ++it) {
      seen.insert(cur);
      cur = rho_step(cur).first;
      if (!is_reduced_indefinite(cur)) throw InternalError("rho_step left the reduced set at " + cur.str());
      if (cur == q) break;
    }
  }
  return out;
}

ClassList classes_square(i64 d) {
  if (d <= 0 || !is_square(d)) throw DomainError("classes_square: need positive square discriminant, got " + std::to_string(d));
  ClassList out;
  out.discriminant = d;
  i64 b = isqrt(d);
  for (i64 a = 0; a < b; ++a) out.reps.push_back({a, b, 0});
  return out;
}

ClassList classes(i64 d) {
  if (d < 0) return classes_negative(d);
  if (d > 0 && is_square(d)) return classes_square(d);
  if (d > 0) return classes_nonsquare(d);
  throw DomainError("classes: discriminant 0");
}

UnimodularMatrix complete_top_row(i64 r, i64 s) {
  i64 x, y;
  if (ext_gcd(r, s, x, y) != 1) throw DomainError("complete_top_row: row not coprime");
  // r x + s y = 1, so [[r, s], [-y, x]] has determinant 1
  i64 C = -y, D = x;
  if (s != 0) {
    i64 as = s < 0 ? -s : s;
    i64 k = floor_div(D, as);
    // shifting (C, D) by k (r, s) keeps the determinant
    i64 sgn = s < 0 ? -1 : 1;
    C -= sgn * k * r;
    D -= sgn * k * s;
  }
  return {r, s, C, D};
}

static Cusp make_cusp(i64 num, i64 den) {
  if (den == 0) return {1, 0};
  i64 g = gcd(num, den);
  num /= g;
  den /= g;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return {num, den};
}

std::array<Cusp, 2> square_roots(const QuadForm& Q) {
  i64 d = Q.disc();
  if (d <= 0 || !is_square(d)) throw DomainError("square_roots: discriminant not a positive square");
  i64 r = isqrt(d);
  if (Q.a == 0) return {Cusp{1, 0}, make_cusp(-Q.c, Q.b)};
  return {make_cusp(-Q.b - r, 2 * Q.a), make_cusp(-Q.b + r, 2 * Q.a)};
}

std::pair<QuadForm, UnimodularMatrix> reduce_square(const QuadForm& Q) {
  i64 d = Q.disc();
  if (d <= 0 || !is_square(d)) throw DomainError("reduce_square: discriminant of " + Q.str() + " is not a positive square");
  i64 b = isqrt(d);
  // linear factor r x + s y of Q, from a rational root
  i64 r, s;
  if (Q.a == 0) {
    r = 0;
    s = 1;
  } else {
    Cusp c = make_cusp(-Q.b + b, 2 * Q.a);  // root x/y = c.r / c.s
    r = c.s;
    s = -c.r;
  }
  UnimodularMatrix g = complete_top_row(r, s);
  QuadForm q = apply(g, Q);
  if (q.c != 0 || (q.b != b && q.b != -b)) throw InternalError("reduce_square: factorization step gave " + q.str());
  // [[1,0],[k,1]] [a, eb, 0] = [a - e k b, e b, 0]
  i64 k = (q.a - mod(q.a, b)) / q.b;
  UnimodularMatrix T{1, 0, k, 1};
  q = apply(T, q);
  g = T * g;
  if (q.b == -b) {
    i64 a = q.a;
    i64 gg = gcd(a, b);
    i64 a1 = a / gg, b1 = b / gg;
    i64 abar1 = b1 == 1 ? 0 : mod_inverse(a1, b1);
    i64 C = (1 - a1 * abar1) / b1;
    UnimodularMatrix M{a1, -b1, C, abar1};
    q = apply(M, q);
    g = M * g;
  }
  if (q.c != 0 || q.b != b || q.a < 0 || q.a >= b) throw InternalError("reduce_square: ended at " + q.str());
  return {q, g};
}

int chi_D(i64 D, const QuadForm& Q) {
  if (!is_fundamental(D)) throw DomainError("chi_D: D = " + std::to_string(D) + " is not a fundamental discriminant");
  i64 disc = Q.disc();
  if (disc % D != 0 || !is_discriminant(disc / D))
    throw DomainError("chi_D: discriminant " + std::to_string(disc) + " is not D times a discriminant");
  if (gcd(gcd(gcd(Q.a, Q.b), Q.c), D) > 1) return 0;
  for (i64 R = 0; R <= kChiSearchRadius; ++R) {
    for (i64 x = -R; x <= R; ++x) {
      bool edge = (x == -R || x == R);
      for (i64 y = -R; y <= R; edge ? ++y : y += 2 * R) {
        i64 v = Q.eval(x, y);
        if (gcd(v, D) == 1) return kronecker(D, v);
        if (R == 0) break;
      }
    }
  }
  throw InternalError("chi_D: no represented value coprime to D found for " + Q.str());
}

UnimodularMatrix automorph_generator(const QuadForm& Q) {
  i64 d = Q.disc();
  if (d <= 0 || is_square(d)) throw DomainError("automorph_generator: need positive nonsquare discriminant");
  PellSolution p = pell_fundamental(d);
  UnimodularMatrix g{(p.t + Q.b * p.u) / 2, Q.c * p.u, -Q.a * p.u, (p.t - Q.b * p.u) / 2};
  if (g.det() != 1 || apply(g, Q) != Q) throw InternalError("automorph_generator: matrix does not fix " + Q.str());
  return g;
}

}  // namespace mocktrace
