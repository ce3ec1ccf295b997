#pragma once

#include <array>
#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "mocktrace/arith.hpp"

namespace mocktrace {

// ax^2 + bxy + cy^2
struct QuadForm {
  i64 a = 0, b = 0, c = 0;
  i64 disc() const { return b * b - 4 * a * c; }
  i64 eval(i64 x, i64 y) const { return a * x * x + b * x * y + c * y * y; }
  cplx eval(cplx tau) const { return (double(a) * tau + double(b)) * tau + double(c); }
  QuadForm operator-() const { return {-a, -b, -c}; }
  auto operator<=>(const QuadForm&) const = default;
  std::string str() const;
};

struct UnimodularMatrix {
  i64 A = 1, B = 0, C = 0, D = 1;
  i64 det() const { return A * D - B * C; }
  UnimodularMatrix operator*(const UnimodularMatrix& o) const {
    return {A * o.A + B * o.C, A * o.B + B * o.D, C * o.A + D * o.C, C * o.B + D * o.D};
  }
  UnimodularMatrix inverse() const { return {D, -B, -C, A}; }
  cplx act(cplx tau) const { return (double(A) * tau + double(B)) / (double(C) * tau + double(D)); }
  bool operator==(const UnimodularMatrix&) const = default;
  std::string str() const;
};

struct ClassList {
  i64 discriminant = 0;
  std::vector<QuadForm> reps;
  std::vector<int> stab_orders;  // negative discriminants only
};

// gamma Q = Q(Dx - By, -Cx + Ay)
QuadForm apply(const UnimodularMatrix& g, const QuadForm& Q);

ClassList classes_negative(i64 d);
ClassList classes_nonsquare(i64 d);
ClassList classes_square(i64 d);
ClassList classes(i64 d);

// Gauss reduction of a positive definite form, with the matrix achieving it
std::pair<QuadForm, UnimodularMatrix> reduce_definite(const QuadForm& Q);
// square-discriminant normal form [a, b, 0], 0 <= a < b, and gamma with apply(gamma, Q) = [a, b, 0]
std::pair<QuadForm, UnimodularMatrix> reduce_square(const QuadForm& Q);

inline constexpr int kChiSearchRadius = 50;
int chi_D(i64 D, const QuadForm& Q);

UnimodularMatrix automorph_generator(const QuadForm& Q);

// classical neighbour step on indefinite forms, returns the matrix as well
std::pair<QuadForm, UnimodularMatrix> rho_step(const QuadForm& Q);
bool is_reduced_indefinite(const QuadForm& Q);

// Roots of Q(x, 1) for square discriminant as cusps r/s in lowest terms with
// s >= 0 (s = 0 means infinity, then r = 1). Ordered (first root, second root)
// as (-b - sqrt d)/2a, (-b + sqrt d)/2a, with the a = 0 case giving (infinity, -c/b).
struct Cusp {
  i64 r = 1, s = 0;
  bool operator==(const Cusp&) const = default;
};
std::array<Cusp, 2> square_roots(const QuadForm& Q);

// complete a coprime row (r, s) to a unimodular matrix with that top row
UnimodularMatrix complete_top_row(i64 r, i64 s);

}  // namespace mocktrace
