#include "cutoff/families.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cutoff {

namespace {

double ell_of(long n) {
  const double nd = static_cast<double>(n);
  return std::log(nd / std::log(nd));
}

// Smallest n >= 2 from which ell_n >= bound holds for every later n.
// ell_n = ln(n/ln n) dips at n = 3 and grows monotonically afterwards.
long min_n_for_ell(double bound) {
  if (ell_of(2) >= bound && ell_of(3) >= bound) return 2;
  long lo = 3, hi = 3;
  while (ell_of(hi) < bound) {
    hi *= 2;
    if (hi > (1L << 60))
      throw std::invalid_argument("ell bound unreachable");
  }
  while (lo < hi) {
    const long mid = lo + (hi - lo) / 2;
    if (ell_of(mid) >= bound)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

const double INF = std::numeric_limits<double>::infinity();

} // namespace

BetaSchedule BetaSchedule::constant(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0))
    raise(errc::beta_out_of_range,
          "constant beta must lie in [0, 1], got " + std::to_string(beta));
  return BetaSchedule(Case::Const, beta, 2);
}

BetaSchedule BetaSchedule::alternating() {
  return BetaSchedule(Case::Alternating, 0.0, 2);
}

BetaSchedule BetaSchedule::one_minus_gamma_over_ell(double gamma) {
  if (!(gamma > 0.0))
    raise(errc::gamma_nonpositive,
          "gamma must be positive, got " + std::to_string(gamma));
  return BetaSchedule(Case::OneMinusGammaOverEll, gamma, min_n_for_ell(gamma));
}

BetaSchedule BetaSchedule::oscillating() {
  return BetaSchedule(Case::Oscillating, 0.0, min_n_for_ell(3.0));
}

std::string BetaSchedule::name() const {
  switch (kind_) {
  case Case::Const: return "const:" + std::to_string(param_);
  case Case::Alternating: return "alternating";
  case Case::OneMinusGammaOverEll:
    return "one_minus_gamma_over_ell:" + std::to_string(param_);
  case Case::Oscillating: return "oscillating";
  }
  return "?";
}

double BetaSchedule::value(long n) const {
  if (n < min_valid_n_)
    raise(errc::beta_out_of_range,
          name() + " leaves [0, 1] below n = " + std::to_string(min_valid_n_) +
              ", got n = " + std::to_string(n));
  switch (kind_) {
  case Case::Const: return param_;
  case Case::Alternating: return (n % 2 == 0) ? 1.0 : 0.0;
  case Case::OneMinusGammaOverEll: return 1.0 - param_ / ell_of(n);
  case Case::Oscillating:
    return 1.0 - (2.0 + ((n % 2 == 0) ? 1.0 : -1.0)) / ell_of(n);
  }
  return 0.0;
}

BetaSchedule::GammaInfo BetaSchedule::gamma() const {
  switch (kind_) {
  case Case::Const:
    // (1 - beta) ell_n is 0 forever at beta = 1 and diverges below it
    return {param_ == 1.0 ? 0.0 : INF, {}, {}};
  case Case::Alternating: return {{}, 0.0, INF};
  case Case::OneMinusGammaOverEll: return {param_, {}, {}};
  case Case::Oscillating: return {{}, 3.0, 1.0};
  }
  return {};
}

ParametricFamily
ParametricFamily::single_ou(std::function<double(long)> log_a_of_n,
                            std::function<double(long)> rho_of_n,
                            std::string label) {
  ParametricFamily f(Kind::SingleOU);
  f.log_a_of_n_ = std::move(log_a_of_n);
  f.rho_of_n_ = std::move(rho_of_n);
  f.name_ = label.empty() ? "single_ou" : std::move(label);
  return f;
}

ParametricFamily ParametricFamily::single_ou_canonical() {
  return single_ou([](long n) { return static_cast<double>(n); },
                   [](long) { return 1.0; });
}

ParametricFamily ParametricFamily::lemma31(BetaSchedule beta) {
  ParametricFamily f(Kind::Lemma31);
  f.name_ = "lemma31[" + beta.name() + "]";
  f.beta_ = std::move(beta);
  return f;
}

ParametricFamily ParametricFamily::hypercube(double rate_scale) {
  if (!(rate_scale > 0.0))
    throw std::invalid_argument("rate scale must be positive");
  ParametricFamily f(Kind::Hypercube);
  f.rate_scale_ = rate_scale;
  f.name_ = "hypercube";
  return f;
}

ParametricFamily ParametricFamily::iid_sample_of(ExpMixture base) {
  ParametricFamily f(Kind::IIDSample);
  f.base_ = std::move(base);
  f.name_ = "iid_sample";
  return f;
}

ParametricFamily ParametricFamily::explicit_list(std::vector<ExpMixture> per_n) {
  if (per_n.empty())
    raise(errc::empty_mixture, "explicit family needs at least one mixture");
  ParametricFamily f(Kind::Explicit);
  f.list_ = std::move(per_n);
  f.name_ = "explicit";
  return f;
}

long ParametricFamily::min_n() const {
  switch (kind_) {
  case Kind::Lemma31: return std::max<long>(2, beta_->min_valid_n());
  default: return 1;
  }
}

bool ParametricFamily::materializable(long n) const {
  switch (kind_) {
  case Kind::Lemma31: return n >= 2 && n <= 8;
  case Kind::Explicit: return n >= 1 && n <= static_cast<long>(list_.size());
  default: return n >= min_n();
  }
}

ExpMixture ParametricFamily::realize(long n) const {
  switch (kind_) {
  case Kind::SingleOU: {
    const double la = log_a_of_n_(n);
    const double rho = rho_of_n_(n);
    if (!(la > 0.0))
      raise(errc::coefficient_not_above_one,
            "single_ou needs a_n > 1 (log_a > 0), got log_a = " +
                std::to_string(la));
    return build_mixture_log({{la, rho}});
  }
  case Kind::Lemma31: {
    const double beta = beta_->value(n);
    if (n < 2)
      raise(errc::index_too_small, "family needs n >= 2");
    if (n > 8)
      throw std::invalid_argument(
          "9^n terms are not materializable past n = 8; use eval_log");
    const Lemma31Params p = lemma31_params(n, beta);
    const double nd = static_cast<double>(n);
    const long m = static_cast<long>(std::llround(std::pow(9.0, nd)));
    std::vector<ExpTerm> terms;
    terms.reserve(static_cast<std::size_t>(m));
    terms.push_back({nd, p.rho1});
    const double step = std::exp(-2.0 * nd);
    for (long i = 2; i <= m; ++i)
      terms.push_back(
          {-nd, nd + std::log1p(static_cast<double>(i - 1) * step)});
    return build_mixture_log(std::move(terms));
  }
  case Kind::Hypercube: {
    if (n < 1)
      throw std::invalid_argument("hypercube dimension must be >= 1");
    std::vector<ExpTerm> terms;
    terms.reserve(static_cast<std::size_t>(n));
    const double nd = static_cast<double>(n);
    for (long k = 1; k <= n; ++k) {
      // ln binomial(n, k) via log-gamma, overflow-free for any dimension
      const double kd = static_cast<double>(k);
      const double log_binom = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
                               std::lgamma(nd - kd + 1.0);
      terms.push_back({log_binom, 2.0 * kd * rate_scale_});
    }
    return build_mixture_log(std::move(terms));
  }
  case Kind::IIDSample: return iid_sample(*base_, n);
  case Kind::Explicit: {
    if (n < 1 || n > static_cast<long>(list_.size()))
      throw std::invalid_argument("explicit family has no index " +
                                  std::to_string(n));
    return list_[static_cast<std::size_t>(n - 1)];
  }
  }
  throw std::logic_error("unreachable");
}

CutoffParams ParametricFamily::params(long n) const {
  switch (kind_) {
  case Kind::SingleOU: {
    const double la = log_a_of_n_(n);
    const double rho = rho_of_n_(n);
    if (!(la > 0.0))
      raise(errc::coefficient_not_above_one,
            "single_ou needs a_n > 1 (log_a > 0)");
    const double t = la / rho;
    const double w = 1.0 / rho;
    return {t, w, correction(t, w), 1};
  }
  case Kind::Lemma31: {
    const Lemma31Params p = lemma31_params(n, beta_->value(n));
    return {p.t, p.w, p.r, 1};
  }
  default: {
    const ExpMixture m = realize(n);
    return cutoff_params(m, cumulative_mass(m));
  }
  }
}

double ParametricFamily::rho1(long n) const {
  switch (kind_) {
  case Kind::SingleOU: return rho_of_n_(n);
  case Kind::Lemma31: return lemma31_params(n, beta_->value(n)).rho1;
  case Kind::Hypercube: return 2.0 * rate_scale_;
  default: return realize(n).term(0).rho;
  }
}

LogInterval ParametricFamily::eval_log(long n, double t) const {
  switch (kind_) {
  case Kind::SingleOU: {
    const double la = log_a_of_n_(n);
    const double rho = rho_of_n_(n);
    if (!(la > 0.0))
      raise(errc::coefficient_not_above_one,
            "single_ou needs a_n > 1 (log_a > 0)");
    return LogInterval::point(la - rho * t);
  }
  case Kind::Lemma31: return evaluate_lemma31(n, beta_->value(n), t);
  default: return LogInterval::point(evaluate(realize(n), t));
  }
}

std::optional<double> ParametricFamily::beta(long n) const {
  if (kind_ != Kind::Lemma31) return std::nullopt;
  return beta_->value(n);
}

const BetaSchedule *ParametricFamily::beta_schedule() const {
  return beta_ ? &*beta_ : nullptr;
}

LowerCertificate
ParametricFamily::lower_certificate(long n, double c,
                                    std::optional<double> eps) const {
  if (materializable(n) && kind_ != Kind::Lemma31) {
    const ExpMixture m = realize(n);
    const CumulativeMass mass = cumulative_mass(m);
    return lower_bound_certificate(m, mass, cutoff_params(m, mass), c, eps);
  }
  // 9^n family: ln A_1 = rho_1 t exactly, so i_star = 1 without a scan
  return lower_certificate_leading(params(n), rho1(n), c, eps);
}

UpperCertificate ParametricFamily::upper_certificate(long n, double c) const {
  if (materializable(n) && kind_ != Kind::Lemma31) {
    const ExpMixture m = realize(n);
    const CumulativeMass mass = cumulative_mass(m);
    return upper_bound_certificate(m, mass, cutoff_params(m, mass), c);
  }
  return upper_certificate_leading(params(n), rho1(n), c);
}

PeresCheck ParametricFamily::peres(const std::vector<long> &n_grid,
                                   double threshold) const {
  return check_peres(
      [this](long n) {
        const CutoffParams p = params(n);
        return rho1(n) * p.t;
      },
      n_grid, threshold);
}

} // namespace cutoff
