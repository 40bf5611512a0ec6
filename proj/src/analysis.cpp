#include "cutoff/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cutoff {

namespace {

const double TIE_REL_TOL = 1e-12;

double ratio_at(const ExpMixture &m, const CumulativeMass &mass,
                std::size_t i0) {
  // ln(A_i) / rho_i, 0-based. log_A >= 0 and rho > 0, so ratios are >= 0.
  return mass.log_A[i0] / m.term(i0).rho;
}

} // namespace

Location location(const ExpMixture &m, const CumulativeMass &mass) {
  double vmax = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = ratio_at(m, mass, i);
    if (v > vmax) vmax = v;
  }
  const double cut = vmax - TIE_REL_TOL * vmax;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (ratio_at(m, mass, i) >= cut) return {vmax, i + 1};
  return {vmax, 1}; // vmax == 0: every ratio ties at zero
}

double width(const ExpMixture &m) { return 1.0 / m.term(0).rho; }

double correction(double t, double w) {
  const double x = t / w; // = rho_1 * t
  if (!(x > 1.0))
    raise(errc::correction_undefined,
          "correction needs rho_1 * t > 1, got " + std::to_string(x));
  return w * (std::log(x) - std::log(std::log(x)));
}

CutoffParams cutoff_params(const ExpMixture &m, const CumulativeMass &mass) {
  const Location loc = location(m, mass);
  const double w = width(m);
  return {loc.t, w, correction(loc.t, w), loc.argmax_index};
}

AlphaCheck check_alpha(const ExpMixture &m, const CumulativeMass &mass,
                       double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("alpha must be positive");
  const double log_alpha = std::log(alpha);
  for (std::size_t i = 1; i < m.size(); ++i) {
    // a_i <= alpha * A_{i-1}, compared in log domain
    if (m.term(i).log_a > log_alpha + mass.log_A[i - 1])
      return {false, alpha, i + 1};
  }
  return {true, alpha, 0};
}

PeresCheck check_peres(const std::function<double(long)> &rho1_t_of_n,
                       const std::vector<long> &n_grid, double threshold) {
  PeresCheck out;
  out.threshold = threshold;
  out.note = "finite-grid heuristic: strict growth plus a threshold on the "
             "last sample is evidence for divergence, not a proof";
  out.values.reserve(n_grid.size());
  for (long n : n_grid) out.values.push_back(rho1_t_of_n(n));
  bool increasing = !out.values.empty();
  for (std::size_t i = 1; i < out.values.size(); ++i)
    if (!(out.values[i] > out.values[i - 1])) increasing = false;
  out.consistent =
      increasing && !out.values.empty() && out.values.back() > threshold;
  return out;
}

namespace {

void check_lower_inputs(double c, double eps, double t, double w) {
  if (!(c < 0.0))
    raise(errc::epsilon_out_of_range,
          "lower certificate needs c < 0, got c = " + std::to_string(c));
  if (!(eps > 0.0) || !(eps < -c))
    raise(errc::epsilon_out_of_range,
          "epsilon must lie in (0, -c), got " + std::to_string(eps));
  if (!(t + c * w > 0.0))
    raise(errc::evaluation_time_negative,
          "evaluation point t + c w must be positive");
}

} // namespace

LowerCertificate lower_bound_certificate(const ExpMixture &m,
                                         const CumulativeMass &mass,
                                         const CutoffParams &p, double c,
                                         std::optional<double> epsilon) {
  const double eps = epsilon.value_or(-c / 10.0);
  check_lower_inputs(c, eps, p.t, p.w);
  const double band_lo = p.t - eps * p.w;
  // Smallest index whose ratio falls in [t - eps w, t]. The argmax ratio
  // equals t, so for params derived from this mixture the set is nonempty.
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = ratio_at(m, mass, i);
    if (v >= band_lo && v <= p.t) {
      const double tau = p.t + c * p.w;
      return {c, eps, i + 1, mass.log_A[i] - m.term(i).rho * tau};
    }
  }
  raise(errc::empty_i_star_set,
        "no index ratio falls in [t - eps w, t]; epsilon too small for this "
        "mixture");
}

UpperCertificate upper_bound_certificate(const ExpMixture &m,
                                         const CumulativeMass &mass,
                                         const CutoffParams &p, double c) {
  if (!(c > 0.0))
    throw std::invalid_argument("upper certificate needs c > 0");
  const double rho1 = m.term(0).rho;
  const double rcw = p.r + c * p.w;
  const double rt = rho1 * p.t;

  // Leading-mass regime: the sup is already attained at the first term,
  // A_1 = e^(rho_1 t) (it can never exceed it). One tail estimate suffices.
  if (mass.log_A[0] >= rt * (1.0 - TIE_REL_TOL))
    return upper_certificate_leading(p, rho1, c);

  // Otherwise split at the smallest l with A_l >= e^(rho_1 t); the argmax
  // index satisfies this, so the scan cannot fall off the end.
  std::size_t l0 = p.argmax_index - 1;
  for (std::size_t i = 1; i < m.size(); ++i) {
    if (mass.log_A[i] >= rt) {
      l0 = i;
      break;
    }
  }
  const double log_Al1 = mass.log_A[l0 - 1]; // ln A_{l-1} < rho_1 t
  const double C = rcw * rho1 * (1.0 - log_Al1 / rt);
  const double head = -rcw * rho1;                              // prefix bound
  const double tail = std::log(p.t / rcw) - (rcw / p.t) * log_Al1; // Riemann
  return {c, l0 + 1, C, logd::add(head, tail)};
}

LowerCertificate lower_certificate_leading(const CutoffParams &p, double rho1,
                                           double c,
                                           std::optional<double> epsilon) {
  const double eps = epsilon.value_or(-c / 10.0);
  check_lower_inputs(c, eps, p.t, p.w);
  // ln A_1 = rho_1 t, so the first index sits at the right edge of the band.
  return {c, eps, 1, rho1 * p.t - rho1 * (p.t + c * p.w)};
}

UpperCertificate upper_certificate_leading(const CutoffParams &p, double rho1,
                                           double c) {
  if (!(c > 0.0))
    throw std::invalid_argument("upper certificate needs c > 0");
  const double rcw = p.r + c * p.w;
  const double log_bound =
      -rcw * rho1 + std::log(p.t / rcw) + std::log1p(rcw / p.t);
  return {c, 1, 0.0, log_bound};
}

} // namespace cutoff
