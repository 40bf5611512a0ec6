#ifndef CUTOFF_ACCEPTANCE_HPP
#define CUTOFF_ACCEPTANCE_HPP

#include <string>
#include <vector>

// Bundled verification suites behind `cutoff-lab verify` and the
// acceptance test binary. Each criterion is self-contained, uses fixed
// seeds where randomness is involved, and reports the measured numbers
// it judged.

namespace cutoff::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// ids run 1..8; anything else raises std::invalid_argument
CriterionResult run_criterion(int id);

// "lemma31" -> {2,3,5,6}, "bounds" -> {1,4,8}, "spectral" -> {7},
// "all" -> everything
std::vector<int> suite_ids(const std::string &suite);

std::vector<CriterionResult> run_suite(const std::string &suite);

} // namespace cutoff::acceptance

#endif
