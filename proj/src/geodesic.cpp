#include "mocktrace/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "mocktrace/errors.hpp"

namespace mocktrace {

// ---- quadrature ----

namespace {
// Kronrod nodes on [-1, 1]; odd indices are the Gauss 7-point nodes
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  cplx value;
  double err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk15(const BatchIntegrand& f, double a, double b, std::vector<double>& nodes, std::vector<cplx>& vals) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  nodes.resize(15);
  for (int j = 0; j < 7; ++j) nodes[2 * j] = c - h * kXgk[j], nodes[2 * j + 1] = c + h * kXgk[j];
  nodes[14] = c;
  f(nodes, vals);
  if (vals.size() != 15) throw ContractViolation("integrate: batch integrand returned the wrong size");
  cplx k = vals[14] * kWgk[7], g = vals[14] * kWg[3];
  for (int j = 0; j < 7; ++j) {
    cplx s = vals[2 * j] + vals[2 * j + 1];
    k += s * kWgk[j];
    if (j % 2 == 1) g += s * kWg[j / 2];
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}
}  // namespace

QuadResult integrate(const std::function<cplx(double)>& f, double a, double b, const QuadOptions& opt) {
  return integrate_batch(
      [&](const std::vector<double>& t, std::vector<cplx>& out) {
        out.resize(t.size());
        for (size_t i = 0; i < t.size(); ++i) out[i] = f(t[i]);
      },
      a, b, opt);
}

QuadResult integrate_batch(const BatchIntegrand& f, double a, double b, const QuadOptions& opt) {
  if (!(b > a)) throw ContractViolation("integrate: empty interval");
  std::vector<double> nodes;
  std::vector<cplx> vals;
  std::priority_queue<Segment> heap;
  QuadResult r;
  int n = std::max(1, opt.initial_panels);
  for (int i = 0; i < n; ++i) {
    double lo = a + (b - a) * i / n, hi = a + (b - a) * (i + 1) / n;
    heap.push(gk15(f, lo, hi, nodes, vals));
    r.evals += 15;
  }
  auto total_err = [&] {
    double e = 0;
    auto copy = heap;
    while (!copy.empty()) e += copy.top().err, copy.pop();
    return e;
  };
  double err = total_err();
  while (err > opt.abs_tol) {
    if (r.evals + 30 > opt.max_evals) {
      r.capped = true;
      break;
    }
    Segment s = heap.top();
    heap.pop();
    double mid = 0.5 * (s.a + s.b);
    Segment l = gk15(f, s.a, mid, nodes, vals), h = gk15(f, mid, s.b, nodes, vals);
    r.evals += 30;
    err += l.err + h.err - s.err;
    heap.push(l);
    heap.push(h);
    if (heap.size() % 64 == 0) err = total_err();  // resync the running sum
  }
  // sum in interval order so the result does not depend on heap layout
  std::vector<Segment> segs;
  while (!heap.empty()) segs.push_back(heap.top()), heap.pop();
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  r.err = 0;
  for (auto& s : segs) r.value += s.value, r.err += s.err;
  return r;
}

// ---- geodesics ----

std::string to_string(CycleKind k) {
  switch (k) {
    case CycleKind::closed: return "closed";
    case CycleKind::cusp_to_cusp: return "cusp_to_cusp";
    case CycleKind::vertical_line: return "vertical_line";
  }
  return "?";
}

cplx GeodesicCycle::point(double t) const {
  if (kind == CycleKind::vertical_line) return {x0, std::exp(t)};
  return {center - radius * std::tanh(t), radius / std::cosh(t)};
}

cplx GeodesicCycle::point_at_theta(double theta) const {
  if (kind == CycleKind::vertical_line) throw ContractViolation("point_at_theta: vertical line");
  return cplx(center, 0) + std::polar(radius, theta);
}

cplx GeodesicCycle::measure_density(double t) const {
  cplx tau = point(t), dtau;
  if (kind == CycleKind::vertical_line)
    dtau = cplx(0, std::exp(t));
  else {
    double sh = 1 / std::cosh(t);
    dtau = radius * cplx(-sh * sh, -sh * std::tanh(t));
  }
  return std::sqrt(static_cast<double>(form.disc())) * dtau / form.eval(tau);
}

static GeodesicCycle semicircle(const QuadForm& Q) {
  GeodesicCycle g;
  g.form = Q;
  double sd = std::sqrt(static_cast<double>(Q.disc()));
  g.center = -static_cast<double>(Q.b) / (2.0 * Q.a);
  g.radius = sd / (2.0 * std::abs(static_cast<double>(Q.a)));
  g.apex = {g.center, g.radius};
  g.orientation = Q.a > 0 ? 1 : -1;
  return g;
}

GeodesicCycle closed_cycle(const QuadForm& Q, double base_t) {
  i64 d = Q.disc();
  if (d <= 0 || is_square(d)) throw DomainError("closed_cycle: discriminant must be positive and nonsquare");
  GeodesicCycle g = semicircle(Q);
  g.kind = CycleKind::closed;
  PellSolution p = pell_fundamental(d);
  double L = 2 * pell_log_unit(p);
  // the automorph moves the apex by hyperbolic distance L along S_Q
  cplx img = automorph_generator(Q).act(g.apex);
  double t1 = std::atanh(std::clamp((g.center - img.real()) / g.radius, -1.0, 1.0));
  if (std::abs(std::abs(t1) - L) > 1e-6 * std::max(1.0, L))
    throw InternalError("closed_cycle: automorph displacement " + std::to_string(t1) + " differs from 2 log eps");
  g.t_lo = base_t;
  g.t_hi = base_t + L;
  return g;
}

GeodesicCycle cusp_cycle(const QuadForm& Q, double T) {
  i64 d = Q.disc();
  if (d <= 0 || !is_square(d)) throw DomainError("cusp_cycle: discriminant must be a positive square");
  GeodesicCycle g;
  if (Q.a == 0) {
    g.form = Q;
    g.kind = CycleKind::vertical_line;
    g.x0 = -static_cast<double>(Q.c) / static_cast<double>(Q.b);
    g.apex = {g.x0, 1.0};
    g.orientation = Q.b > 0 ? 1 : -1;
  } else {
    g = semicircle(Q);
    g.kind = CycleKind::cusp_to_cusp;
  }
  g.t_lo = -T;
  g.t_hi = T;
  return g;
}

QuadResult cycle_integral_closed(const QuadForm& Q, const std::function<cplx(cplx)>& f, const QuadOptions& opt,
                                 double base_t) {
  GeodesicCycle g = closed_cycle(Q, base_t);
  double sd = std::sqrt(static_cast<double>(Q.disc()));
  QuadResult r = integrate([&](double t) { return f(g.point(t)); }, g.t_lo, g.t_hi, opt);
  r.value /= sd;
  r.err /= sd;
  return r;
}

QuadResult cycle_integral_cusp(const QuadForm& Q, const std::function<cplx(cplx)>& f, const QuadOptions& opt,
                               double T) {
  GeodesicCycle g = cusp_cycle(Q, T);
  double sd = std::sqrt(static_cast<double>(Q.disc()));
  QuadOptions o = opt;
  o.initial_panels = std::max(o.initial_panels, static_cast<int>(std::ceil(T)));
  QuadResult r = integrate([&](double t) { return f(g.point(t)); }, g.t_lo, g.t_hi, o);
  // integrand decays like e^{-|t|}, so the remainder beyond +-T is bounded by the endpoint values
  double tail = std::abs(f(g.point(g.t_lo))) + std::abs(f(g.point(g.t_hi)));
  r.value /= sd;
  r.err = (r.err + tail) / sd;
  return r;
}

// ---- traces ----

std::string to_string(TraceMethod m) {
  switch (m) {
    case TraceMethod::cm_points: return "cm_points";
    case TraceMethod::closed_cycle: return "closed_cycle";
    case TraceMethod::cusp_cycle: return "cusp_cycle";
    case TraceMethod::kloosterman_series: return "kloosterman_series";
    case TraceMethod::poincare_s: return "poincare_s";
  }
  return "?";
}

TraceMethod trace_method_from_string(const std::string& s) {
  for (auto m : {TraceMethod::cm_points, TraceMethod::closed_cycle, TraceMethod::cusp_cycle,
                 TraceMethod::kloosterman_series, TraceMethod::poincare_s})
    if (to_string(m) == s) return m;
  throw ContractViolation("unknown trace method '" + s + "'");
}

static void check_pair(i64 d, i64 D) {
  if (!is_discriminant(d) || !is_discriminant(D)) throw DomainError("d and D must be 0 or 1 mod 4");
  if (D <= 0 || !is_fundamental(D)) throw DomainError("D must be a positive fundamental discriminant");
}

static void check_m(int m, int lo) {
  if (m < lo || m > kMaxM) throw DomainError("m = " + std::to_string(m) + " outside [" + std::to_string(lo) + ", 10]");
}

static void finish_imag(TraceResult& r, double imag) {
  r.imag_residue = std::abs(imag);
  if (r.imag_residue > kImagResidueTol)
    r.warnings.push_back("imaginary part " + std::to_string(imag) + " discarded");
}

static const std::vector<QuadForm>& reps_for(const ClassList& cl, const TraceOptions& opt) {
  if (opt.reps.empty()) return cl.reps;
  if (opt.reps.size() != cl.reps.size()) throw ContractViolation("trace: representative override has wrong size");
  for (const auto& q : opt.reps)
    if (q.disc() != cl.discriminant) throw ContractViolation("trace: representative with wrong discriminant");
  return opt.reps;
}

TraceResult trace_negative(i64 d, i64 D, int m) {
  check_pair(d, D);
  check_m(m, 0);
  if (d >= 0) throw DomainError("trace_negative: d must be negative");
  i64 n = d * D;
  ClassList cl = classes_negative(n);
  cplx sum = 0;
  double sn = std::sqrt(static_cast<double>(-n));
  for (size_t i = 0; i < cl.reps.size(); ++i) {
    const QuadForm& Q = cl.reps[i];
    int chi = chi_D(D, Q);
    if (chi == 0) continue;
    cplx tau(-static_cast<double>(Q.b) / (2.0 * Q.a), sn / (2.0 * Q.a));
    sum += static_cast<double>(chi) / cl.stab_orders[i] * eval_jm(m, tau);
  }
  sum /= std::sqrt(static_cast<double>(D));
  TraceResult r;
  r.d = d, r.D = D, r.m = m;
  r.method = TraceMethod::cm_points;
  r.value = sum.real();
  r.err_estimate = 1e-12 * std::max(1.0, std::abs(sum));
  r.params["classes"] = static_cast<double>(cl.reps.size());
  finish_imag(r, sum.imag());
  return r;
}

TraceResult trace_nonsquare(i64 d, i64 D, int m, const TraceOptions& opt) {
  check_pair(d, D);
  check_m(m, 0);
  i64 n = d * D;
  if (n <= 0 || is_square(n)) throw DomainError("trace_nonsquare: dD must be positive and nonsquare");
  ClassList cl = classes_nonsquare(n);
  const auto& reps = reps_for(cl, opt);
  cplx sum = 0;
  double err = 0;
  long evals = 0;
  bool capped = false;
  for (const QuadForm& Q : reps) {
    int chi = chi_D(D, Q);
    if (chi == 0) continue;
    QuadResult q = cycle_integral_closed(Q, [m](cplx tau) { return eval_jm(m, tau); }, opt.quad);
    capped = capped || q.capped;
    sum += static_cast<double>(chi) * q.value;
    err += q.err;
    evals += q.evals;
  }
  sum /= 2 * kPi;
  TraceResult r;
  r.d = d, r.D = D, r.m = m;
  r.method = TraceMethod::closed_cycle;
  r.value = sum.real();
  r.err_estimate = err / (2 * kPi);
  r.params["abs_tol"] = opt.quad.abs_tol;
  r.params["evals"] = static_cast<double>(evals);
  r.params["classes"] = static_cast<double>(cl.reps.size());
  if (capped) r.warnings.push_back("quadrature evaluation cap reached; err_estimate is the unmet residual");
  finish_imag(r, sum.imag());
  return r;
}

TraceResult trace_square(i64 d, i64 D, int m, const TraceOptions& opt) {
  check_pair(d, D);
  if (m == 0) throw DomainError("trace_square: m = 0 diverges");
  check_m(m, 1);
  i64 n = d * D;
  if (n <= 0 || !is_square(n)) throw DomainError("trace_square: dD must be a positive square");
  ClassList cl = classes_square(n);
  const auto& reps = reps_for(cl, opt);
  cplx sum = 0;
  double err = 0;
  long evals = 0;
  bool capped = false;
  for (const QuadForm& Q : reps) {
    int chi = chi_D(D, Q);
    if (chi == 0) continue;
    QuadResult q = cycle_integral_cusp(Q, [&](cplx tau) { return eval_jmQ(m, Q, tau, opt.jmq); }, opt.quad, opt.T);
    capped = capped || q.capped;
    sum += static_cast<double>(chi) * q.value;
    err += q.err;
    evals += q.evals;
  }
  sum /= 2 * kPi;
  TraceResult r;
  r.d = d, r.D = D, r.m = m;
  r.method = TraceMethod::cusp_cycle;
  r.value = sum.real();
  r.err_estimate = err / (2 * kPi);
  r.params["abs_tol"] = opt.quad.abs_tol;
  r.params["T"] = opt.T;
  r.params["v_star"] = opt.jmq.v_star;
  r.params["evals"] = static_cast<double>(evals);
  r.params["classes"] = static_cast<double>(cl.reps.size());
  if (capped) r.warnings.push_back("quadrature evaluation cap reached; err_estimate is the unmet residual");
  finish_imag(r, sum.imag());
  return r;
}

TraceResult trace(i64 d, i64 D, int m, const TraceOptions& opt) {
  i64 n = d * D;
  if (n < 0) return trace_negative(d, D, m);
  if (n == 0) throw DomainError("trace: dD = 0");
  if (is_square(n)) return trace_square(d, D, m, opt);
  return trace_nonsquare(d, D, m, opt);
}

}  // namespace mocktrace
