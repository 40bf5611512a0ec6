#ifndef CUTOFF_FAMILIES_HPP
#define CUTOFF_FAMILIES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cutoff/analysis.hpp"
#include "cutoff/lemma31.hpp"
#include "cutoff/mixture.hpp"

// Sequences of mixtures indexed by n, with closed-form cutoff data where
// the structure provides it and materialized terms where it does not.

namespace cutoff {

// beta_n drives the slow rate of the 9^n-term family. All schedules are
// clamped to [0, 1] by construction; below min_valid_n the defining formula
// would leave that range, and value() refuses to extrapolate.
class BetaSchedule {
public:
  enum class Case { Const, Alternating, OneMinusGammaOverEll, Oscillating };

  static BetaSchedule constant(double beta); // BetaOutOfRange outside [0,1]
  static BetaSchedule alternating();         // 1 for even n, 0 for odd n
  // beta_n = 1 - gamma / ell_n, gamma > 0 (GammaNonpositive otherwise)
  static BetaSchedule one_minus_gamma_over_ell(double gamma);
  // beta_n = 1 - (2 + (-1)^n) / ell_n: the target of (1 - beta_n) ell_n
  // oscillates between 3 (even) and 1 (odd) forever
  static BetaSchedule oscillating();

  Case kind() const { return kind_; }
  std::string name() const;
  long min_valid_n() const { return min_valid_n_; }
  double value(long n) const; // BetaOutOfRange below min_valid_n

  // Limit data for (1 - beta_n) ell_n: a whole-sequence limit when it
  // exists, parity-split limits otherwise. +infinity is a legal value.
  struct GammaInfo {
    std::optional<double> limit;
    std::optional<double> even;
    std::optional<double> odd;
  };
  GammaInfo gamma() const;

private:
  BetaSchedule(Case kind, double param, long min_n)
      : kind_(kind), param_(param), min_valid_n_(min_n) {}

  Case kind_;
  double param_; // beta for Const, gamma for OneMinusGammaOverEll
  long min_valid_n_;
};

class ParametricFamily {
public:
  enum class Kind { SingleOU, Lemma31, Hypercube, IIDSample, Explicit };

  // One-term family a_n e^(-rho_n t); the coefficient schedule is supplied
  // in log form and must stay above 1 (CoefficientNotAboveOne).
  static ParametricFamily
  single_ou(std::function<double(long)> log_a_of_n,
            std::function<double(long)> rho_of_n, std::string label = "");
  // Default schedule a_n = e^n, rho_n = 1.
  static ParametricFamily single_ou_canonical();

  // The 9^n-term family; materializable only for n <= 8 (9^8 terms already
  // cost about 1.4 GB to realize), evaluable for any n via the enclosure.
  static ParametricFamily lemma31(BetaSchedule beta);

  // n-coordinate product of symmetric two-state chains, each contributing
  // the unit term (1, 2): d^2(t) = (1 + e^(-2t))^n - 1, realized as
  // (binomial(n,k), 2k) for k = 1..n. rate_scale rescales every rate.
  static ParametricFamily hypercube(double rate_scale = 1.0);

  static ParametricFamily iid_sample_of(ExpMixture base);
  static ParametricFamily explicit_list(std::vector<ExpMixture> per_n);

  Kind kind() const { return kind_; }
  const std::string &name() const { return name_; }
  long min_n() const;
  bool materializable(long n) const;

  // Explicit term list; throws when not materializable at this n.
  ExpMixture realize(long n) const;

  // Cutoff location/window/correction, from closed forms when available.
  CutoffParams params(long n) const;
  double rho1(long n) const;

  // Enclosure of ln d_n(t); exact (zero-width) except for the virtual
  // 9^n family, which returns its Riemann sandwich.
  LogInterval eval_log(long n, double t) const;

  std::optional<double> beta(long n) const;
  const BetaSchedule *beta_schedule() const;

  // Certificates at the family level, routed through the materialized
  // mixture when possible and the leading-term closed forms otherwise.
  LowerCertificate lower_certificate(long n, double c,
                                     std::optional<double> eps = {}) const;
  UpperCertificate upper_certificate(long n, double c) const;

  // Divergence heuristic for rho_1,n * t_n along this family.
  PeresCheck peres(const std::vector<long> &n_grid,
                   double threshold = 10.0) const;

private:
  explicit ParametricFamily(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::string name_;
  std::function<double(long)> log_a_of_n_, rho_of_n_;
  std::optional<BetaSchedule> beta_;
  double rate_scale_ = 1.0;
  std::optional<ExpMixture> base_;
  std::vector<ExpMixture> list_;
};

} // namespace cutoff

#endif
