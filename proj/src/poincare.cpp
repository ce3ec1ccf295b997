#include "mocktrace/poincare.hpp"

#include <algorithm>
#include <cmath>

#include "mocktrace/errors.hpp"
#include "mocktrace/geodesic.hpp"

namespace mocktrace {

std::vector<CosetRep> coset_reps(i64 bound) {
  CosetTable t = build_coset_table(bound);
  std::vector<CosetRep> out;
  out.reserve(t.size());
  for (size_t i = 0; i < t.size(); ++i) out.push_back({UnimodularMatrix{t.A[i], t.B[i], t.c[i], t.d[i]}, t.c[i], t.d[i]});
  return out;
}

double phi_ms(int m, double s, double y) { return PhiEval(m, s)(y); }

static void check_series_args(double s, i64 bound) {
  if (!(s > 1)) throw DomainError("Poincare series: s must exceed 1");
  if (s < kMinPoincareS) throw DomainError("Poincare series: s below the practical convergence floor 1.25");
  if (bound < 10) throw ContractViolation("Poincare series: bound must be >= 10");
}

static void check_tau(cplx tau) {
  if (!(tau.imag() > 0)) throw DomainError("Poincare series: tau must lie in the upper half-plane");
}

std::array<std::pair<i64, i64>, 2> excluded_bottoms(const QuadForm& Q) {
  std::array<Cusp, 2> roots = square_roots(Q);
  std::array<std::pair<i64, i64>, 2> out;
  for (int k = 0; k < 2; ++k) {
    const Cusp& r = roots[k];
    out[k] = r.s == 0 ? std::pair<i64, i64>{0, 1} : std::pair<i64, i64>{r.s, -r.r};
  }
  return out;
}

static std::vector<size_t> excluded_indices(const CosetTable& t, const QuadForm& Q) {
  std::vector<size_t> idx;
  for (auto [c, d] : excluded_bottoms(Q))
    for (size_t i = 0; i < t.size(); ++i)
      if (t.c[i] == c && t.d[i] == d) idx.push_back(i);
  return idx;
}

double eisenstein_box_tail(cplx tau, double s, i64 bound) {
  check_tau(tau);
  if (!(s > 1)) throw DomainError("eisenstein_box_tail: s must exceed 1");
  const double y = tau.imag();
  // coprime density 1/zeta(2); half the plane because (c, d) ~ (-c, -d)
  auto f = [&](double ang) {
    double c = std::cos(ang), sn = std::sin(ang);
    double rho = double(bound) / std::max(std::abs(c), std::abs(sn));
    double q = std::norm(c * tau + sn);
    return cplx(std::pow(y, s) * std::pow(q, -s) * std::pow(rho, 2 - 2 * s) / (2 * s - 2), 0);
  };
  QuadOptions o;
  o.abs_tol = 1e-13;
  return integrate(f, 0, 2 * kPi, o).value.real() / (2 * zeta_real(2));
}

static PoincareValue gm_value(int m, cplx tau, double s, const CosetTable& t, const std::vector<size_t>& skip,
                              ExecMode mode) {
  PhiEval phi(m, s);
  std::vector<cplx> out;
  gm_node_sums(t, phi, skip, {tau}, out, mode);
  PoincareValue v;
  v.value = out[0];
  v.terms = static_cast<long>(t.size() - skip.size());
  double tail = eisenstein_box_tail(tau, s, t.bound);
  if (m == 0) {
    v.tail_correction = tail;
    v.tail_estimate = std::abs(tail);
  } else {
    // phi(y) ~ kappa y^s for small y, phases ignored
    double kappa = phi(1e-8) / std::pow(1e-8, s);
    v.tail_estimate = kappa * tail;
  }
  return v;
}

PoincareValue eval_Gm(int m, cplx tau, double s, i64 bound, ExecMode mode) {
  check_series_args(s, bound);
  check_tau(tau);
  return gm_value(m, tau, s, build_coset_table(bound), {}, mode);
}

PoincareValue eval_GmQ(int m, const QuadForm& Q, cplx tau, double s, i64 bound, ExecMode mode) {
  check_series_args(s, bound);
  check_tau(tau);
  if (Q.disc() <= 0 || !is_square(Q.disc())) throw DomainError("eval_GmQ: disc(Q) must be a positive square");
  CosetTable t = build_coset_table(bound);
  return gm_value(m, tau, s, t, excluded_indices(t, Q), mode);
}

double prop1_B(double s) { return std::exp(s * std::log(2.0) + 2 * log_gamma_real(s / 2) - log_gamma_real(s)); }

Prop1Side prop1_lhs(i64 d, i64 D, int m, double s, const Prop1Options& opt) {
  if (m < 0) throw DomainError("prop1_lhs: m must be nonnegative");
  if (!is_discriminant(d) || !is_discriminant(D) || d <= 0 || D <= 0)
    throw DomainError("prop1_lhs: d and D must be positive discriminants");
  if (!is_fundamental(D)) throw DomainError("prop1_lhs: D must be fundamental");
  const i64 n = d * D;
  if (!is_square(n)) throw DomainError("prop1_lhs: dD must be a square");
  if (s < kMinPoincareS || s > 3) throw DomainError("prop1_lhs: s must lie in [1.25, 3]");
  if (opt.levels < 1) throw ContractViolation("prop1_lhs: need at least one annulus level");
  const i64 bound = opt.bound > 0 ? opt.bound : (s >= 2 ? 300 : 1500);
  if (bound < 10) throw ContractViolation("prop1_lhs: bound must be >= 10");

  const CosetTable table = build_coset_table(bound);
  const PhiEval phi(m, s);
  const PhiIntegral Phi(m, s);
  const double Bs = prop1_B(s);
  // the box-truncated integrand decays like bound * e^{-s|t|} at both cusps
  const double T = (23.0 + std::log(double(bound))) / s;

  Prop1Side out;
  out.bound = bound;
  out.box_values.assign(opt.levels + 1, 0.0);
  for (const QuadForm& Q : classes_square(n).reps) {
    int chi = chi_D(D, Q);
    if (chi == 0) continue;
    const GeodesicCycle g = cusp_cycle(Q, T);
    const std::vector<size_t> skip = excluded_indices(table, Q);
    std::vector<cplx> taus;
    auto f = [&](const std::vector<double>& ts, std::vector<cplx>& vals) {
      taus.resize(ts.size());
      for (size_t i = 0; i < ts.size(); ++i) taus[i] = g.point(ts[i]);
      gm_node_sums(table, phi, skip, taus, vals, opt.mode);
    };
    QuadOptions qo;
    qo.abs_tol = opt.quad_tol;
    qo.initial_panels = static_cast<int>(std::ceil(T));
    qo.max_evals = 20000;
    QuadResult q = integrate_batch(f, -T, T, qo);
    out.quad_err += q.err / Bs;
    out.quad_evals += q.evals;
    double level = q.value.real();
    out.box_values[0] += chi * level / Bs;
    for (int k = 1; k <= opt.levels; ++k) {
      level += annulus_sum(Q, m, Phi, bound << (k - 1), bound << k, opt.mode).real();
      out.box_values[k] += chi * level / Bs;
    }
  }
  const double ratio = std::pow(2.0, s - 1) - 1;
  for (int k = 1; k <= opt.levels; ++k) {
    double a = out.box_values[k - 1], b = out.box_values[k];
    out.extrapolations.push_back(b + (b - a) / ratio);
  }
  out.value = out.extrapolations.back();
  double spread = out.extrapolations.size() > 1
                      ? std::abs(out.extrapolations.back() - out.extrapolations[out.extrapolations.size() - 2])
                      : std::abs(out.box_values.back() - out.box_values[out.box_values.size() - 2]);
  out.err_estimate = spread + out.quad_err;
  return out;
}

}  // namespace mocktrace
