#ifndef CUTOFF_LOG_DOMAIN_HPP
#define CUTOFF_LOG_DOMAIN_HPP

#include <cassert>
#include <cmath>
#include <limits>
#include <span>

// Log-domain scalar helpers. Magnitudes are carried as natural logs with
// -infinity standing for an exact zero, so quantities like exp(1e6) survive
// arithmetic that would overflow in linear space.

namespace cutoff::logd {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

inline bool is_zero(double log_x) { return log_x == neg_inf; }

// ln(e^x + e^y)
inline double add(double x, double y) {
  if (is_zero(x)) return y;
  if (is_zero(y)) return x;
  const double larger = (x > y) ? x : y;
  const double smaller = (x > y) ? y : x;
  return larger + std::log1p(std::exp(smaller - larger));
}

// ln(e^x - e^y); requires x >= y, returns -inf when they cancel exactly
inline double sub(double x, double y) {
  assert(x >= y);
  if (is_zero(y)) return x;
  if (x == y) return neg_inf;
  return x + std::log(-std::expm1(y - x));
}

// ln(1 + e^u), stable for large |u| in either direction
inline double log1p_exp(double u) {
  if (u > 0.0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

// ln(sum_i e^{x_i}) with a single max shift; empty input is log(0)
inline double sum(std::span<const double> xs) {
  double m = neg_inf;
  for (double x : xs)
    if (x > m) m = x;
  if (is_zero(m)) return neg_inf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

} // namespace cutoff::logd

namespace cutoff {

// Rigorous enclosure of a log-domain value: log_lo <= ln(true) <= log_hi.
struct LogInterval {
  double log_lo;
  double log_hi;

  static LogInterval point(double log_x) { return {log_x, log_x}; }

  double midpoint() const { return 0.5 * (log_lo + log_hi); }
  // relative width of the enclosed linear value, e^(hi-lo) - 1
  double relative_width() const { return std::expm1(log_hi - log_lo); }
  bool contains(double log_x) const {
    return log_lo <= log_x && log_x <= log_hi;
  }
};

} // namespace cutoff

#endif
