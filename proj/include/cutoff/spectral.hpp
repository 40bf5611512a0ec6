#ifndef CUTOFF_SPECTRAL_HPP
#define CUTOFF_SPECTRAL_HPP

#include <cstddef>
#include <vector>

#include "cutoff/mixture.hpp"

// Chi-square distance mixtures extracted from reversible continuous-time
// generators. For a reversible chain started at x,
//   chi2_x(t) = sum_y (P_t(x,y) - pi_y)^2 / pi_y
//             = sum_{j >= 2} (psi_j(x)^2 / pi_x) exp(2 lambda_j t),
// where psi_j are orthonormal eigenvectors of the symmetrized generator
// D^(1/2) Q D^(-1/2) and lambda_j <= 0 its eigenvalues.

namespace cutoff {

struct Generator {
  std::size_t states;
  std::vector<double> Q; // row-major, states x states
  double at(std::size_t i, std::size_t j) const { return Q[i * states + j]; }
};

// Validates shape, nonnegative off-diagonals and zero row sums
// (1e-10 absolute, scaled by the row's magnitude).
Generator make_generator(std::size_t states, std::vector<double> q);

// Unique pi > 0 with pi Q = 0, sum pi = 1. NotIrreducible when the support
// graph is not strongly connected (or the solve degenerates).
std::vector<double> stationary_distribution(const Generator &g);

// Spectral chi-square mixture seen from `start`: terms
// (psi_j(start)^2 / pi_start, 2|lambda_j|), equal rates merged.
// Eigenvalues within 1e-12 of zero (relative to the spectral radius) count
// as stationary and are excluded. Throws NotReversible when detailed
// balance fails at 1e-9 relative, DegenerateLeadingTerm when the slowest
// surviving component carries no weight at `start`.
ExpMixture chi_square_mixture(const Generator &g, std::size_t start);

// Row of exp(tQ) at `start` by uniformization, Poisson tail below 1e-15.
// Independent of the spectral path above: only powers of the uniformized
// kernel enter.
std::vector<double> matrix_exponential_row(const Generator &g,
                                           std::size_t start, double t);

// chi2_start(t) straight from the matrix exponential row.
double chi_square_reference(const Generator &g, const std::vector<double> &pi,
                            std::size_t start, double t);

} // namespace cutoff

#endif
