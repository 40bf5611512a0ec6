#ifndef CUTOFF_ERRORS_HPP
#define CUTOFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cutoff {

// Every recoverable failure in the library carries one of these codes so
// callers can branch on the condition without parsing message text.
enum class errc {
  empty_mixture,
  nonpositive_rate,
  leading_coefficient_zero,
  exponent_at_pole,
  index_too_small,
  correction_undefined,
  epsilon_out_of_range,
  evaluation_time_negative,
  empty_i_star_set,
  gamma_nonpositive,
  beta_out_of_range,
  coefficient_not_above_one,
  not_irreducible,
  not_reversible,
  degenerate_leading_term,
  tolerance_not_met,
  io_failure,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string &what) {
  throw error(code, what);
}

inline const char *errc_name(errc code) {
  switch (code) {
  case errc::empty_mixture: return "EmptyMixture";
  case errc::nonpositive_rate: return "NonpositiveRate";
  case errc::leading_coefficient_zero: return "LeadingCoefficientZero";
  case errc::exponent_at_pole: return "ExponentAtPole";
  case errc::index_too_small: return "IndexTooSmall";
  case errc::correction_undefined: return "CorrectionUndefined";
  case errc::epsilon_out_of_range: return "EpsilonOutOfRange";
  case errc::evaluation_time_negative: return "EvaluationTimeNegative";
  case errc::empty_i_star_set: return "EmptyIStarSet";
  case errc::gamma_nonpositive: return "GammaNonpositive";
  case errc::beta_out_of_range: return "BetaOutOfRange";
  case errc::coefficient_not_above_one: return "CoefficientNotAboveOne";
  case errc::not_irreducible: return "NotIrreducible";
  case errc::not_reversible: return "NotReversible";
  case errc::degenerate_leading_term: return "DegenerateLeadingTerm";
  case errc::tolerance_not_met: return "ToleranceNotMet";
  case errc::io_failure: return "IoFailure";
  }
  return "UnknownError";
}

} // namespace cutoff

#endif
