#ifndef CUTOFF_IO_HPP
#define CUTOFF_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "cutoff/analysis.hpp"
#include "cutoff/families.hpp"
#include "cutoff/harness.hpp"
#include "cutoff/mixture.hpp"
#include "cutoff/spectral.hpp"

// File formats and descriptor parsing. Malformed content raises
// std::invalid_argument; unreadable or unwritable files raise IoFailure.

namespace cutoff::io {

// {"terms": [{"a": number | "log_a": number, "rho": number}, ...]};
// each term takes exactly one of the two coefficient keys.
ExpMixture mixture_from_json(const nlohmann::json &j);
nlohmann::ordered_json mixture_to_json(const ExpMixture &m);
ExpMixture read_mixture(const std::string &path);
void write_mixture(const ExpMixture &m, const std::string &path);

// {"states": N, "Q": [[...], ...]} with row-major rates
Generator generator_from_json(const nlohmann::json &j);
Generator read_generator(const std::string &path);

// Descriptors come either as JSON, e.g.
//   {"kind": "lemma31", "beta": {"case": "const", "value": 0.5}}
//   {"kind": "single_ou"}
//   {"kind": "hypercube", "rate_scale": 2.0}
// or as shorthand strings:
//   single_ou | hypercube[:scale] | lemma31/const:V | lemma31/alternating
//   | lemma31/one_minus_gamma_over_ell:V | lemma31/oscillating
ParametricFamily family_from_json(const nlohmann::json &j);
ParametricFamily family_from_descriptor(const std::string &text);
// As above, but a descriptor naming an existing file is read first.
ParametricFamily family_from_descriptor_or_file(const std::string &text);

BetaSchedule beta_from_json(const nlohmann::json &j);

struct AnalysisReport {
  CutoffParams params{};
  bool r_defined = false;
  bool tn_positive = false;
  std::optional<AlphaCheck> alpha;
  std::optional<PeresCheck> peres;
};
nlohmann::ordered_json analysis_to_json(const AnalysisReport &rep);

// {"family": <descriptor>, "n_grid": [...], "c_grid": [...],
//  "offset_rule": "left|right|shifted|custom", "theta": number?,
//  "tolerance": {"slack"?, "limit"?, "separation"?}?}
SweepSpec sweep_spec_from_json(const nlohmann::json &j);
SweepSpec read_sweep_spec(const std::string &path);

OffsetRule offset_rule_from_name(const std::string &name);

std::string read_text_file(const std::string &path);
nlohmann::json load_json(const std::string &path);

} // namespace cutoff::io

#endif
