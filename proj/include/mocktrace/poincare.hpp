#pragma once

#include <vector>

#include "mocktrace/arith.hpp"
#include "mocktrace/kernels.hpp"
#include "mocktrace/qform.hpp"

namespace mocktrace {

struct CosetRep {
  UnimodularMatrix matrix;
  i64 c = 0, d = 1;  // bottom row
};
std::vector<CosetRep> coset_reps(i64 bound);

double phi_ms(int m, double s, double y);

inline constexpr double kMinPoincareS = 1.25;

struct PoincareValue {
  cplx value = 0;
  double tail_estimate = 0;
  cplx tail_correction = 0;  // continuum estimate of the omitted cosets, m = 0 only
  long terms = 0;
};

PoincareValue eval_Gm(int m, cplx tau, double s, i64 bound, ExecMode mode = ExecMode::parallel);
// G_m with the two cosets attached to the roots of Q removed
PoincareValue eval_GmQ(int m, const QuadForm& Q, cplx tau, double s, i64 bound, ExecMode mode = ExecMode::parallel);
// normalized bottom rows (c >= 0, d = 1 if c = 0) of the cosets sending a root of Q to infinity
std::array<std::pair<i64, i64>, 2> excluded_bottoms(const QuadForm& Q);

// sum over coprime (c, d) outside the box of y^s / |c tau + d|^{2s}, by the continuum approximation
double eisenstein_box_tail(cplx tau, double s, i64 bound);

double prop1_B(double s);  // 2^s Gamma(s/2)^2 / Gamma(s)

struct Prop1Options {
  i64 bound = 0;       // 0 picks 300 for s >= 2 and 1500 below
  int levels = 3;      // annuli out to bound * 2^levels
  double quad_tol = 1e-8;
  ExecMode mode = ExecMode::parallel;
};

struct Prop1Side {
  double value = 0;
  double err_estimate = 0;
  i64 bound = 0;
  std::vector<double> box_values;      // L(bound * 2^k), k = 0..levels
  std::vector<double> extrapolations;  // Richardson in bound^{1-s} over consecutive pairs
  double quad_err = 0;
  long quad_evals = 0;
};

Prop1Side prop1_lhs(i64 d, i64 D, int m, double s, const Prop1Options& opt = {});

}  // namespace mocktrace
