#include "cutoff/mixture.hpp"

#include <algorithm>
#include <cmath>

namespace cutoff {

namespace {

// Sort by rate and fold terms whose rates compare equal. Exact comparison is
// intentional: callers that need fuzzy merging (e.g. eigenvalues with
// round-off) snap rates before building.
std::vector<ExpTerm> canonicalize(std::vector<ExpTerm> raw) {
  std::sort(raw.begin(), raw.end(),
            [](const ExpTerm &x, const ExpTerm &y) { return x.rho < y.rho; });
  std::vector<ExpTerm> out;
  out.reserve(raw.size());
  for (const ExpTerm &t : raw) {
    if (!out.empty() && out.back().rho == t.rho)
      out.back().log_a = logd::add(out.back().log_a, t.log_a);
    else
      out.push_back(t);
  }
  return out;
}

} // namespace

ExpMixture build_mixture_log(std::vector<ExpTerm> raw) {
  if (raw.empty())
    raise(errc::empty_mixture, "mixture needs at least one term");
  for (const ExpTerm &t : raw) {
    if (!(t.rho > 0.0) || !std::isfinite(t.rho))
      raise(errc::nonpositive_rate,
            "rates must be finite and positive, got " + std::to_string(t.rho));
    if (std::isnan(t.log_a) || t.log_a == std::numeric_limits<double>::infinity())
      raise(errc::leading_coefficient_zero,
            "coefficients must be finite or exactly zero in log domain");
  }
  std::vector<ExpTerm> terms = canonicalize(std::move(raw));
  if (logd::is_zero(terms.front().log_a))
    raise(errc::leading_coefficient_zero,
          "the slowest-rate coefficient must be strictly positive");
  return ExpMixture(std::move(terms));
}

ExpMixture build_mixture(const std::vector<std::pair<double, double>> &terms) {
  std::vector<ExpTerm> raw;
  raw.reserve(terms.size());
  for (auto [a, rho] : terms) {
    if (a < 0.0 || std::isnan(a))
      raise(errc::leading_coefficient_zero,
            "linear coefficients must be nonnegative; use split_signed for "
            "signed decompositions");
    raw.push_back({a == 0.0 ? logd::neg_inf : std::log(a), rho});
  }
  return build_mixture_log(std::move(raw));
}

double evaluate(const ExpMixture &m, double t) {
  // Single max shift keeps large mixtures stable. The max term's own
  // exp(x - top) is exactly 1, so folding the others in through log1p
  // returns a lone term's exponent untouched.
  double top = logd::neg_inf;
  for (const ExpTerm &term : m.terms()) {
    if (logd::is_zero(term.log_a)) continue;
    const double x = term.log_a - term.rho * t;
    if (x > top) top = x;
  }
  double rest = 0.0;
  bool seen_max = false;
  for (const ExpTerm &term : m.terms()) {
    if (logd::is_zero(term.log_a)) continue;
    const double x = term.log_a - term.rho * t;
    if (!seen_max && x == top) {
      seen_max = true;
      continue;
    }
    rest += std::exp(x - top);
  }
  return top + std::log1p(rest);
}

CumulativeMass cumulative_mass(const ExpMixture &m) {
  CumulativeMass out;
  out.log_A.reserve(m.size());
  double running = logd::neg_inf; // ln(a_1 + ... + a_i)
  for (const ExpTerm &t : m.terms()) {
    running = logd::add(running, t.log_a);
    out.log_A.push_back(running > 0.0 ? running : 0.0);
  }
  return out;
}

ExpMixture tensor_sum(const ExpMixture &a, const ExpMixture &b) {
  std::vector<ExpTerm> raw;
  raw.reserve(a.size() + b.size());
  raw.insert(raw.end(), a.terms().begin(), a.terms().end());
  raw.insert(raw.end(), b.terms().begin(), b.terms().end());
  return build_mixture_log(std::move(raw));
}

ExpMixture iid_sample(const ExpMixture &m, long n) {
  if (n < 1)
    throw std::invalid_argument("iid_sample requires n >= 1");
  const double shift = std::log(static_cast<double>(n));
  std::vector<ExpTerm> raw = m.terms();
  for (ExpTerm &t : raw)
    if (!logd::is_zero(t.log_a)) t.log_a += shift;
  return build_mixture_log(std::move(raw));
}

ExpMixture scale_rates(const ExpMixture &m, double s) {
  if (!(s > 0.0) || !std::isfinite(s))
    throw std::invalid_argument("rate scale must be finite and positive");
  std::vector<ExpTerm> raw = m.terms();
  for (ExpTerm &t : raw) t.rho *= s;
  return build_mixture_log(std::move(raw));
}

SignedSplit split_signed(const std::vector<std::pair<double, double>> &terms) {
  std::vector<ExpTerm> plus, minus;
  for (auto [a, rho] : terms) {
    if (std::isnan(a))
      throw std::invalid_argument("signed coefficient is NaN");
    if (a > 0.0)
      plus.push_back({std::log(a), rho});
    else if (a < 0.0)
      minus.push_back({std::log(-a), rho});
    // exact zeros contribute to neither side
  }
  SignedSplit out{build_mixture_log(std::move(plus)), std::nullopt};
  if (!minus.empty()) out.minus = build_mixture_log(std::move(minus));
  return out;
}

} // namespace cutoff
