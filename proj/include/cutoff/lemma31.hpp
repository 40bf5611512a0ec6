#ifndef CUTOFF_LEMMA31_HPP
#define CUTOFF_LEMMA31_HPP

#include "cutoff/log_domain.hpp"

// The two-block family with m_n = 9^n terms:
//
//   a_1 = e^n,  rho_1 = n / (1 + beta * ell_n / n),   ell_n = ln(n / ln n)
//   a_i = e^-n, rho_i = ln(e^n + (i-1) e^-n)          for i = 2 .. 9^n
//
// Its distance splits as d(t) = D1 + D2 where D1 = exp(n - rho_1 t) is exact
// and D2 is a Riemann sum of x^(-t) on a grid of step e^-n starting at e^n.
// Sandwiching the sum between the shifted integrals gives a rigorous
// enclosure whose relative width decays like the e^(-2n) sampling step, so
// the family is evaluable far beyond any materializable term count.

namespace cutoff {

struct Lemma31Params {
  double ell;  // ln(n / ln n)
  double t;    // 1 + beta ell / n
  double w;    // t / n
  double r;    // ell * w
  double rho1; // n / t
};

// Closed-form cutoff data for the family; requires n >= 2, beta in [0, 1].
Lemma31Params lemma31_params(long n, double beta);

// Rigorous enclosure of ln d_n(t) for t > 0.
// Throws ExponentAtPole when t is so close to 1 that the antiderivative
// x^(1-t)/(1-t) loses its denominator; IndexTooSmall for n < 2.
LogInterval evaluate_lemma31(long n, double beta, double t);

} // namespace cutoff

#endif
