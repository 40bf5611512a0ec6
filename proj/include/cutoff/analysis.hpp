#ifndef CUTOFF_ANALYSIS_HPP
#define CUTOFF_ANALYSIS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cutoff/mixture.hpp"

// Cutoff location/window extraction and the finite-n bound certificates.
// Everything here works on one fixed mixture; sequence-level questions
// (does rho_1*t diverge along the family?) take a callback over n.

namespace cutoff {

struct Location {
  double t;                // sup_i ln(A_i) / rho_i, may be 0
  std::size_t argmax_index; // 1-based, smallest index attaining the sup
};

// Ties within 1e-12 relative resolve to the smallest index.
Location location(const ExpMixture &m, const CumulativeMass &mass);

// w = 1 / rho_1
double width(const ExpMixture &m);

// r = w * (ln(t/w) - ln ln(t/w)); requires t/w > 1, else CorrectionUndefined.
double correction(double t, double w);

struct CutoffParams {
  double t;
  double w;
  double r;
  std::size_t argmax_index; // 1-based
};

// location + width + correction in one shot. Fails (CorrectionUndefined)
// when t <= w, which covers the degenerate t = 0 case.
CutoffParams cutoff_params(const ExpMixture &m, const CumulativeMass &mass);

// Coefficient growth condition a_i <= alpha * A_{i-1} for all i >= 2.
struct AlphaCheck {
  bool ok;
  double alpha;
  std::size_t first_violation; // 1-based index of first failure, 0 if none
};

AlphaCheck check_alpha(const ExpMixture &m, const CumulativeMass &mass,
                       double alpha);

// Heuristic divergence probe for the product rho_1,n * t_n along a family:
// consistent when the sampled values strictly increase and the last one
// clears the threshold. A finite grid cannot certify a limit, so the report
// carries an explicit disclaimer.
struct PeresCheck {
  bool consistent;
  std::vector<double> values; // rho_1,n * t_n on the grid
  double threshold;
  std::string note;
};

PeresCheck check_peres(const std::function<double(long)> &rho1_t_of_n,
                       const std::vector<long> &n_grid,
                       double threshold = 10.0);

// Finite-n witness for the left-window lower bound. For c < 0 and
// epsilon in (0, -c), i_star is the smallest index whose ratio
// ln(A_i)/rho_i lies in [t - epsilon*w, t], and
//   log_bound = ln(A_{i_star}) - rho_{i_star} (t + c w)
// satisfies  -c - epsilon <= log_bound <= ln d(t + c w).
struct LowerCertificate {
  double c;
  double epsilon;
  std::size_t i_star; // 1-based
  double log_bound;
};

// epsilon defaults to -c/10. Throws EpsilonOutOfRange,
// EvaluationTimeNegative (t + c w <= 0), EmptyIStarSet.
LowerCertificate lower_bound_certificate(const ExpMixture &m,
                                         const CumulativeMass &mass,
                                         const CutoffParams &p, double c,
                                         std::optional<double> epsilon = {});

// Finite-n upper bound at t + r + c w for c > 0. Two regimes:
//   A_1 = e^(rho_1 t):  bound = e^(-(r+cw) rho_1) (t/(r+cw)) ((r+cw)/t + 1)
//   otherwise, with l the smallest index s.t. A_l >= e^(rho_1 t) (l >= 2):
//     C = (r+cw) rho_1 (1 - ln(A_{l-1}) / (rho_1 t)) >= 0
//     bound = e^(-(r+cw) rho_1) + (t/(r+cw)) A_{l-1}^(-(r+cw)/t)
struct UpperCertificate {
  double c;
  std::size_t l_index; // 1-based; 1 marks the leading-mass regime
  double C;            // 0 exactly in the leading-mass regime
  double log_bound;
};

UpperCertificate upper_bound_certificate(const ExpMixture &m,
                                         const CumulativeMass &mass,
                                         const CutoffParams &p, double c);

// Certificates for families whose sup is attained at the first term
// (ln A_1 = rho_1 t), computable without materializing any terms.
LowerCertificate lower_certificate_leading(const CutoffParams &p, double rho1,
                                           double c,
                                           std::optional<double> epsilon = {});
UpperCertificate upper_certificate_leading(const CutoffParams &p, double rho1,
                                           double c);

} // namespace cutoff

#endif
