#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "mocktrace/arith.hpp"
#include "mocktrace/qform.hpp"

namespace mocktrace {

// serial runs the same fixed chunks in order, so both modes give bit-identical sums
enum class ExecMode { serial, parallel };
inline constexpr long kReduceChunk = 2048;

int worker_count();

// body(k, lo, hi) handles chunk k = [lo, hi); chunks may run concurrently in parallel mode
void for_each_chunk(long n, long chunk, const std::function<void(long, long, long)>& body, ExecMode mode);

template <class T, class Body>
T chunked_reduce(long n, T zero, Body body, ExecMode mode, long chunk = kReduceChunk) {
  long nchunks = (n + chunk - 1) / chunk;
  std::vector<T> part(nchunks, zero);
  for_each_chunk(n, chunk, [&](long k, long lo, long hi) { part[k] = body(lo, hi); }, mode);
  T s = zero;
  for (const T& p : part) s += p;
  return s;
}

// ---- cosets of Gamma_infinity \ SL2(Z) ----

// bottom rows (c, d) with max(|c|, |d|) <= bound, c > 0 or (c, d) = (0, 1), in order c then d
struct CosetTable {
  i64 bound = 0;
  std::vector<i64> A, B, c, d;
  size_t size() const { return c.size(); }
};
CosetTable build_coset_table(i64 bound);

// phi_{m,s}(y): y^s for m = 0, 2 pi sqrt|m| y^{1/2} I_{s-1/2}(2 pi |m| y) otherwise
class PhiEval {
 public:
  PhiEval(int m, double s);
  double operator()(double y) const;
  int m() const { return m_; }
  double s() const { return s_; }

 private:
  int m_;
  double s_;
  double switch_y_ = 0;
  std::vector<double> coef_;  // phi(y) = y^s sum_k coef_k y^{2k} below switch_y_
};

// Phi(R) = int_0^pi cos(2 pi m R cos theta) phi(R sin theta) d theta / sin theta, small R
class PhiIntegral {
 public:
  PhiIntegral(int m, double s);
  double operator()(double R) const;
  double max_radius() const { return max_R_; }

 private:
  double s_;
  double max_R_;
  std::vector<double> coef_;  // Phi(R) = R^s sum_n coef_n R^{2n}
};

// out[j] = sum over table cosets, except those at indices `skip`, of e(-m Re g tau_j) phi(Im g tau_j)
void gm_node_sums(const CosetTable& table, const PhiEval& phi, const std::vector<size_t>& skip,
                  const std::vector<cplx>& taus, std::vector<cplx>& out, ExecMode mode);

// sum over cosets with lo < max(|c|, |d|) <= hi of e(m b'/2a') Phi(sqrt(disc) / 2|a'|), [a', b', c'] = gQ;
// cosets with a' = 0 are skipped
cplx annulus_sum(const QuadForm& Q, int m, const PhiIntegral& Phi, i64 lo, i64 hi, ExecMode mode);

// terms[c - 1] = f(c) for c = 1..cmax
std::vector<double> c_terms(long cmax, const std::function<double(long)>& f, ExecMode mode);

}  // namespace mocktrace
