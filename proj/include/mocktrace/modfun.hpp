#pragma once

#include <utility>
#include <vector>

#include "mocktrace/arith.hpp"
#include "mocktrace/qform.hpp"

namespace mocktrace {

// sum_{n >= lead} c(n) q^n, truncated at q^N
struct QExpansion {
  int lead = 0;
  std::vector<double> coeffs;  // coeffs[k] = c(lead + k)
  int last() const { return lead + static_cast<int>(coeffs.size()) - 1; }
  double coeff(int n) const {
    if (n < lead || n > last()) return 0.0;
    return coeffs[n - lead];
  }
  bool operator==(const QExpansion&) const = default;
};

inline constexpr int kMaxSeriesN = 64;
inline constexpr int kMaxM = 10;
inline constexpr int kDefaultN = 48;

QExpansion j_coeffs(int N);
QExpansion jm_coeffs(int m, int N);

// Shared read-only table of j_m expansions at the default length.
const QExpansion& jm_table(int m);
// Replace the table entry (used by the disk cache); the expansion must pass validation.
void jm_table_install(int m, const QExpansion& e);
bool jm_expansion_valid(int m, const QExpansion& e);

// tau' = gamma tau in the closed standard fundamental domain
std::pair<cplx, UnimodularMatrix> reduce_to_fundamental(cplx tau);

cplx eval_jm(int m, cplx tau);
// q-series at w without reduction, excluding the q^{-m} term
cplx jm_tail_at(int m, cplx w);

struct CuspMatrix {
  i64 alpha_num = 0, alpha_den = 1;
  UnimodularMatrix gamma;
};
CuspMatrix cusp_matrix(i64 r, i64 s);

struct JmQOptions {
  double v_star = 1.0;  // switch to grouped evaluation above this Im(gamma_alpha tau)
  int phase_sign = -1;  // cusp terms carry e(phase_sign * m * Re(gamma_alpha tau))
};
cplx eval_jmQ(int m, const QuadForm& Q, cplx tau, const JmQOptions& opt = {});

// the two cusp matrices gamma_alpha for the roots of a square-discriminant form
std::array<CuspMatrix, 2> root_cusp_matrices(const QuadForm& Q);

}  // namespace mocktrace
