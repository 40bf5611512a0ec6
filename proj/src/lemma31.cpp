#include "cutoff/lemma31.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cutoff/errors.hpp"

namespace cutoff {

namespace {

const double LN9 = std::log(9.0);
// |t - 1| below this would make 1/(t-1) overflow past double range; the
// enclosure refuses to approximate across the pole.
const double POLE_GUARD = 1e-300;

void validate(long n, double beta) {
  if (n < 2)
    raise(errc::index_too_small,
          "family is defined for n >= 2, got n = " + std::to_string(n));
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("beta must lie in [0, 1]");
}

// ln of integral_a^b x^(-t) dx with endpoints passed as ln a < ln b.
// Antiderivative x^(1-t)/(1-t); the difference of powers is taken through
// expm1 so nearby endpoints do not cancel.
double log_power_integral(double log_a, double log_b, double t) {
  if (t > 1.0) {
    // (a^(1-t) - b^(1-t)) / (t - 1)
    return (1.0 - t) * log_a +
           std::log(-std::expm1((1.0 - t) * (log_b - log_a))) -
           std::log(t - 1.0);
  }
  // (b^(1-t) - a^(1-t)) / (1 - t)
  return (1.0 - t) * log_b +
         std::log(-std::expm1((1.0 - t) * (log_a - log_b))) -
         std::log(1.0 - t);
}

} // namespace

Lemma31Params lemma31_params(long n, double beta) {
  validate(n, beta);
  const double nd = static_cast<double>(n);
  Lemma31Params p;
  p.ell = std::log(nd / std::log(nd));
  p.t = 1.0 + beta * p.ell / nd;
  p.w = p.t / nd;
  p.r = p.ell * p.w;
  p.rho1 = nd / p.t;
  return p;
}

LogInterval evaluate_lemma31(long n, double beta, double t) {
  validate(n, beta);
  if (!(t > 0.0))
    throw std::invalid_argument("evaluation time must be positive");
  if (std::abs(t - 1.0) < POLE_GUARD)
    raise(errc::exponent_at_pole,
          "antiderivative denominator underflows at t = " + std::to_string(t));

  const double nd = static_cast<double>(n);
  const Lemma31Params p = lemma31_params(n, beta);
  const double d1 = nd - p.rho1 * t;

  // Grid points x_k = e^n + k e^-n, so ln x_k = n + ln(1 + k e^-2n); the
  // product k e^-2n overflows as k reaches 9^n, hence the softplus form.
  const double log_m = nd * LN9;                       // ln 9^n
  const double log_m1 = log_m + std::log1p(-std::exp(-log_m)); // ln(9^n - 1)
  const double lx0 = nd;                               // k = 0
  const double lx1 = nd + logd::log1p_exp(0.0 - 2.0 * nd);     // k = 1
  const double lxm1 = nd + logd::log1p_exp(log_m1 - 2.0 * nd); // k = m-1
  const double lxm = nd + logd::log1p_exp(log_m - 2.0 * nd);   // k = m

  // x -> x^(-t) decreases, so the left-endpoint Riemann sum D2 is pinched:
  //   int_{x_1}^{x_m} <= D2 <= int_{x_0}^{x_{m-1}}
  const double lo = logd::add(d1, log_power_integral(lx1, lxm, t));
  const double hi = logd::add(d1, log_power_integral(lx0, lxm1, t));
  return {lo, hi};
}

} // namespace cutoff
