#include <doctest.h>

#include <cutoff/errors.hpp>
#include <cutoff/lemma31.hpp>
#include <cutoff/log_domain.hpp>

#include <cmath>
#include <vector>

using namespace cutoff;

namespace {

// Brute-force ln d_n(t) by streaming all 9^n terms. Only feasible for small
// n, which is exactly what makes it an independent check of the enclosure.
double brute_force_log_d(long n, double beta, double t) {
  const double nd = static_cast<double>(n);
  const Lemma31Params p = lemma31_params(n, beta);
  const double lead = nd - p.rho1 * t;

  long m = 1;
  for (long i = 0; i < n; ++i) m *= 9;

  // exponents decrease with i, so the i = 2 term anchors the shift
  const double shift = -nd - (nd + std::log1p(std::exp(-2.0 * nd))) * t;
  double acc = 0.0;
  for (long i = 2; i <= m; ++i) {
    const double rho =
        nd + std::log1p(static_cast<double>(i - 1) * std::exp(-2.0 * nd));
    acc += std::exp(-nd - rho * t - shift);
  }
  return logd::add(lead, shift + std::log(acc));
}

} // namespace

TEST_CASE("closed-form parameters at n = 10") {
  const auto p = lemma31_params(10, 1.0);
  CHECK(p.ell == doctest::Approx(1.4685526).epsilon(1e-6));
  CHECK(p.t == doctest::Approx(1.1468553).epsilon(1e-6));
  CHECK(p.w == doctest::Approx(0.11468553).epsilon(1e-6));
  CHECK(p.r == doctest::Approx(0.16842203).epsilon(1e-6));
  CHECK(p.rho1 == doctest::Approx(10.0 / 1.1468553).epsilon(1e-6));
  CHECK(p.rho1 * p.t == doctest::Approx(10.0).epsilon(1e-15));

  const auto p0 = lemma31_params(10, 0.0);
  CHECK(p0.t == 1.0);
  CHECK(p0.w == 0.1);
  CHECK(p0.rho1 == 10.0);
}

TEST_CASE("beta interpolates the parameters linearly") {
  const auto lo = lemma31_params(40, 0.0);
  const auto mid = lemma31_params(40, 0.5);
  const auto hi = lemma31_params(40, 1.0);
  CHECK(mid.t == doctest::Approx(0.5 * (lo.t + hi.t)).epsilon(1e-15));
  CHECK(lo.ell == hi.ell);
}

TEST_CASE("enclosure contains the brute-force value") {
  for (long n = 2; n <= 5; ++n) {
    for (double beta : {0.0, 1.0}) {
      const auto p = lemma31_params(n, beta);
      const std::vector<double> probes{0.35,      0.9,        1.02,
                                       1.5,       p.t + p.r,  p.t + 2 * p.r,
                                       p.t + 3.0};
      for (double t : probes) {
        if (std::abs(t - 1.0) < 1e-9) continue;
        const auto box = evaluate_lemma31(n, beta, t);
        const double truth = brute_force_log_d(n, beta, t);
        INFO("n=", n, " beta=", beta, " t=", t, " lo=", box.log_lo,
             " hi=", box.log_hi, " truth=", truth);
        CHECK(box.log_lo <= box.log_hi);
        // the oracle itself carries rounding of order 1e-15 per term
        CHECK(box.log_lo <= truth + 1e-9);
        CHECK(truth <= box.log_hi + 1e-9);
      }
    }
  }
}

TEST_CASE("enclosure is tight at scale") {
  for (double beta : {0.0, 0.5, 1.0}) {
    const auto p = lemma31_params(100, beta);
    for (double offset : {0.0, 0.5 * p.r, p.r, p.r + p.w}) {
      const auto box = evaluate_lemma31(100, beta, p.t + offset + 0.003);
      CHECK(box.relative_width() >= 0.0);
      CHECK(box.relative_width() < 1e-3);
    }
  }
}

TEST_CASE("enclosure stays finite far beyond materializable sizes") {
  const auto box = evaluate_lemma31(10000, 0.5, 1.5);
  CHECK(std::isfinite(box.log_lo));
  CHECK(std::isfinite(box.log_hi));
  CHECK(box.log_lo <= box.log_hi);

  // the whole enclosure decreases in t
  const auto later = evaluate_lemma31(10000, 0.5, 2.5);
  CHECK(later.log_hi < box.log_lo);
}

TEST_CASE("pole and domain errors") {
  CHECK_THROWS_AS((void)evaluate_lemma31(10, 0.5, 1.0), error);
  try {
    (void)evaluate_lemma31(10, 0.5, 1.0);
    FAIL("expected a throw");
  } catch (const error &e) {
    CHECK(e.code() == errc::exponent_at_pole);
  }

  try {
    (void)evaluate_lemma31(1, 0.5, 2.0);
    FAIL("expected a throw");
  } catch (const error &e) {
    CHECK(e.code() == errc::index_too_small);
  }
  CHECK_THROWS_AS((void)lemma31_params(1, 0.0), error);
  CHECK_THROWS_AS((void)lemma31_params(0, 0.0), error);

  CHECK_THROWS_AS((void)lemma31_params(10, -0.1), std::invalid_argument);
  CHECK_THROWS_AS((void)lemma31_params(10, 1.5), std::invalid_argument);
  CHECK_THROWS_AS((void)evaluate_lemma31(10, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)evaluate_lemma31(10, 0.5, -2.0), std::invalid_argument);
}

TEST_CASE("evaluation just off the pole works on both sides") {
  const auto below = evaluate_lemma31(10, 0.5, 1.0 - 1e-9);
  const auto above = evaluate_lemma31(10, 0.5, 1.0 + 1e-9);
  CHECK(std::isfinite(below.log_lo));
  CHECK(std::isfinite(above.log_hi));
  // continuity across the removable singularity of the antiderivative
  CHECK(below.midpoint() == doctest::Approx(above.midpoint()).epsilon(1e-6));
}
