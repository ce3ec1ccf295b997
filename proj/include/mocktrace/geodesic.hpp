#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mocktrace/arith.hpp"
#include "mocktrace/modfun.hpp"
#include "mocktrace/qform.hpp"

namespace mocktrace {

// ---- adaptive Gauss-Kronrod (7, 15) ----
struct QuadOptions {
  double abs_tol = 1e-9;
  long max_evals = 200000;
  int initial_panels = 8;
};
struct QuadResult {
  cplx value = 0;
  double err = 0;
  long evals = 0;
  bool capped = false;  // evaluation cap hit before the tolerance was met
};
QuadResult integrate(const std::function<cplx(double)>& f, double a, double b, const QuadOptions& opt = {});
// f(nodes, values) evaluates all 15 nodes of a panel in one call
using BatchIntegrand = std::function<void(const std::vector<double>&, std::vector<cplx>&)>;
QuadResult integrate_batch(const BatchIntegrand& f, double a, double b, const QuadOptions& opt = {});

// ---- geodesics ----
enum class CycleKind { closed, cusp_to_cusp, vertical_line };
std::string to_string(CycleKind k);

// Semicircles are parametrized by hyperbolic arclength,
// tau(t) = center + radius (-tanh t + i sech t), so that d tau_Q = orientation * dt.
// Vertical lines use tau(t) = x0 + i e^t.
struct GeodesicCycle {
  QuadForm form;
  CycleKind kind = CycleKind::closed;
  cplx apex = 0;
  double center = 0, radius = 0;  // semicircle
  double x0 = 0;                  // vertical line
  double t_lo = 0, t_hi = 0;
  int orientation = 1;  // +1: increasing t is the positive direction of S_Q
  cplx point(double t) const;
  cplx point_at_theta(double theta) const;  // semicircle only, theta in (0, pi)
  // sqrt(d) tau'(t) / Q(tau(t), 1), equal to orientation for every t
  cplx measure_density(double t) const;
};

GeodesicCycle closed_cycle(const QuadForm& Q, double base_t = 0);
inline constexpr double kDefaultCuspTruncation = 30.0;
GeodesicCycle cusp_cycle(const QuadForm& Q, double T = kDefaultCuspTruncation);

// integral of f(tau) d tau / Q(tau, 1) over one period of the closed geodesic
QuadResult cycle_integral_closed(const QuadForm& Q, const std::function<cplx(cplx)>& f, const QuadOptions& opt = {},
                                 double base_t = 0);
// integral of f(tau) d tau / Q(tau, 1) over the cusp-to-cusp geodesic truncated at |t| <= T;
// err includes the endpoint bound |f(tau(-T))| + |f(tau(T))| times the measure factor
QuadResult cycle_integral_cusp(const QuadForm& Q, const std::function<cplx(cplx)>& f, const QuadOptions& opt = {},
                               double T = kDefaultCuspTruncation);

// ---- traces ----
enum class TraceMethod { cm_points, closed_cycle, cusp_cycle, kloosterman_series, poincare_s };
std::string to_string(TraceMethod m);
TraceMethod trace_method_from_string(const std::string& s);

struct TraceResult {
  double value = 0;
  i64 d = 0, D = 0;
  int m = 0;
  TraceMethod method = TraceMethod::cm_points;
  std::map<std::string, double> params;
  double err_estimate = 0;
  double imag_residue = 0;
  std::vector<std::string> warnings;
  bool operator==(const TraceResult&) const = default;
};

inline constexpr double kImagResidueTol = 1e-8;

struct TraceOptions {
  QuadOptions quad;
  double T = kDefaultCuspTruncation;
  JmQOptions jmq;
  // replaces the class representatives (one per class, same order) when non-empty
  std::vector<QuadForm> reps;
};

TraceResult trace_negative(i64 d, i64 D, int m);
TraceResult trace_nonsquare(i64 d, i64 D, int m, const TraceOptions& opt = {});
TraceResult trace_square(i64 d, i64 D, int m, const TraceOptions& opt = {});
// routes on the sign and squareness of dD
TraceResult trace(i64 d, i64 D, int m, const TraceOptions& opt = {});

}  // namespace mocktrace
