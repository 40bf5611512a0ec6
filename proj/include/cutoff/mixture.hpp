#ifndef CUTOFF_MIXTURE_HPP
#define CUTOFF_MIXTURE_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cutoff/errors.hpp"
#include "cutoff/log_domain.hpp"

// Finite mixtures of decaying exponentials d(t) = sum_i a_i exp(-rho_i t)
// with 0 < rho_1 < rho_2 < ... and a_1 > 0. Coefficients are stored as
// natural logs (-inf encodes a_i = 0, which is legal anywhere except the
// leading term).

namespace cutoff {

struct ExpTerm {
  double log_a;
  double rho;
};

class ExpMixture {
public:
  const std::vector<ExpTerm> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const ExpTerm &term(std::size_t i) const { return terms_[i]; } // 0-based

  friend ExpMixture build_mixture_log(std::vector<ExpTerm> raw);

private:
  explicit ExpMixture(std::vector<ExpTerm> sorted_terms)
      : terms_(std::move(sorted_terms)) {}

  std::vector<ExpTerm> terms_;
};

// Canonicalize a term list: sort by rate, merge duplicate rates by log-adding
// their coefficients, then validate the mixture invariants.
// Throws: EmptyMixture, NonpositiveRate, LeadingCoefficientZero.
ExpMixture build_mixture_log(std::vector<ExpTerm> raw);

// Same, from linear (a, rho) pairs with a >= 0.
ExpMixture build_mixture(const std::vector<std::pair<double, double>> &terms);

// ln d(t). Exact log-sum-exp; t may be any real.
double evaluate(const ExpMixture &m, double t);

// Running truncated masses A_i = max(1, a_1 + ... + a_i), stored as logs.
// log_A is nondecreasing and nonnegative.
struct CumulativeMass {
  std::vector<double> log_A;
};

CumulativeMass cumulative_mass(const ExpMixture &m);

// Distance mixture of an independent pair: union of the term lists,
// coefficients of coinciding rates summed.
ExpMixture tensor_sum(const ExpMixture &a, const ExpMixture &b);

// n-fold i.i.d. product in the M = +infinity regime: every coefficient
// scales by n, rates are untouched.
ExpMixture iid_sample(const ExpMixture &m, long n);

// Multiply every rate by s > 0 (time rescaling t -> t/s).
ExpMixture scale_rates(const ExpMixture &m, double s);

// Decomposition of a signed coefficient list into two nonnegative mixtures
// with d(t) = plus(t) - minus(t). The minus part is absent when no negative
// coefficients survive merging.
struct SignedSplit {
  ExpMixture plus;
  std::optional<ExpMixture> minus;
};

SignedSplit split_signed(const std::vector<std::pair<double, double>> &terms);

} // namespace cutoff

#endif
