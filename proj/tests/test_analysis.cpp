#include <doctest.h>

#include <cutoff/analysis.hpp>
#include <cutoff/errors.hpp>
#include <cutoff/mixture.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace cutoff;

TEST_CASE("location picks the dominating ratio") {
  SUBCASE("second prefix dominates") {
    const auto m = build_mixture({{std::exp(1.0), 1.0}, {std::exp(3.0), 2.0}});
    const auto mass = cumulative_mass(m);
    const auto loc = location(m, mass);
    // ln(e + e^3) / 2 beats ln(e) / 1
    CHECK(loc.t == doctest::Approx(1.5634640).epsilon(1e-6));
    CHECK(loc.argmax_index == 2);
  }
  SUBCASE("3-dimensional hypercube walk") {
    const auto m = build_mixture({{3.0, 2.0}, {3.0, 4.0}, {1.0, 6.0}});
    const auto mass = cumulative_mass(m);
    const auto loc = location(m, mass);
    CHECK(loc.t == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-14));
    CHECK(loc.t == doctest::Approx(0.5493061).epsilon(1e-6));
    CHECK(loc.argmax_index == 1);
  }
  SUBCASE("sub-unit mass means t = 0") {
    const auto m = build_mixture({{0.5, 1.0}, {0.3, 2.0}});
    const auto mass = cumulative_mass(m);
    const auto loc = location(m, mass);
    CHECK(loc.t == 0.0);
    CHECK(loc.argmax_index == 1);
  }
}

TEST_CASE("width is the reciprocal lead rate") {
  CHECK(width(build_mixture({{2.0, 4.0}, {1.0, 9.0}})) == 0.25);
}

TEST_CASE("correction term") {
  // t/w = e makes ln(t/w) = 1 and lnln(t/w) = 0, so r = w exactly
  CHECK(correction(std::exp(1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(correction(2.0 * std::exp(1.0), 2.0) ==
        doctest::Approx(2.0).epsilon(1e-14));

  // r < 0 is legal once lnln passes ln, never here: t/w = e^e gives r > 0
  const double te = std::exp(std::exp(1.0));
  CHECK(correction(te, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));

  try {
    (void)correction(1.0, 1.0);
    FAIL("expected a throw");
  } catch (const error &e) {
    CHECK(e.code() == errc::correction_undefined);
  }
  CHECK_THROWS_AS((void)correction(0.5, 1.0), error);
}

TEST_CASE("cutoff_params composes the three quantities") {
  const auto m = build_mixture({{std::exp(1.0), 1.0}, {std::exp(3.0), 2.0}});
  const auto mass = cumulative_mass(m);
  const auto p = cutoff_params(m, mass);
  CHECK(p.t == doctest::Approx(1.5634640).epsilon(1e-6));
  CHECK(p.w == 1.0);
  CHECK(p.r == doctest::Approx(correction(p.t, p.w)).epsilon(1e-15));
  CHECK(p.argmax_index == 2);

  const auto tiny = build_mixture({{0.5, 1.0}});
  CHECK_THROWS_AS((void)cutoff_params(tiny, cumulative_mass(tiny)), error);
}

TEST_CASE("alpha growth check") {
  // a = (2, 1, 4): A = (2, 3, 7); a_2 = 1 <= 0.5*2, a_3 = 4 > 0.5*3
  const auto m = build_mixture({{2.0, 1.0}, {1.0, 2.0}, {4.0, 3.0}});
  const auto mass = cumulative_mass(m);

  const auto bad = check_alpha(m, mass, 0.5);
  CHECK_FALSE(bad.ok);
  CHECK(bad.first_violation == 3);

  const auto good = check_alpha(m, mass, 2.0);
  CHECK(good.ok);
  CHECK(good.first_violation == 0);

  const auto single = build_mixture({{2.0, 1.0}});
  CHECK(check_alpha(single, cumulative_mass(single), 0.01).ok);
}

TEST_CASE("divergence probe over a family grid") {
  const auto diverging = [](long n) { return static_cast<double>(n); };
  const auto ok = check_peres(diverging, {10, 100, 1000});
  CHECK(ok.consistent);
  REQUIRE(ok.values.size() == 3);
  CHECK(ok.values[2] == 1000.0);
  CHECK_FALSE(ok.note.empty());

  const auto flat = [](long) { return 42.0; };
  CHECK_FALSE(check_peres(flat, {10, 100, 1000}).consistent);

  const auto small = [](long n) { return 1.0 + 1.0 / static_cast<double>(n); };
  CHECK_FALSE(check_peres(small, {10, 100, 1000}).consistent);

  CHECK(check_peres(diverging, {2, 20}, 15.0).consistent);
  CHECK_FALSE(check_peres(diverging, {2, 12}, 15.0).consistent);
}

TEST_CASE("lower witness on a single heavy term") {
  // a_1 = e^100, rho_1 = 1: t = 100, w = 1
  const auto m = build_mixture_log({{100.0, 1.0}});
  const auto mass = cumulative_mass(m);
  const auto p = cutoff_params(m, mass);
  REQUIRE(p.t == doctest::Approx(100.0));

  SUBCASE("explicit epsilon") {
    const auto cert = lower_bound_certificate(m, mass, p, -1.0, 0.5);
    CHECK(cert.i_star == 1);
    CHECK(cert.epsilon == 0.5);
    // ln A_1 - rho_1 (t - w) = 100 - 99 = 1 = -c
    CHECK(cert.log_bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cert.log_bound >= -cert.c - cert.epsilon);
    CHECK(cert.log_bound <= evaluate(m, p.t + cert.c * p.w) + 1e-12);
  }
  SUBCASE("default epsilon is a tenth of -c") {
    const auto cert = lower_bound_certificate(m, mass, p, -1.0);
    CHECK(cert.epsilon == doctest::Approx(0.1));
    CHECK(cert.log_bound == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lower witness input validation") {
  const auto m = build_mixture_log({{1.2, 1.0}});
  const auto mass = cumulative_mass(m);
  const auto p = cutoff_params(m, mass);
  REQUIRE(p.t == doctest::Approx(1.2));

  // c must be negative and epsilon inside (0, -c)
  CHECK_THROWS_AS((void)lower_bound_certificate(m, mass, p, 0.5), error);
  CHECK_THROWS_AS((void)lower_bound_certificate(m, mass, p, -1.0, 1.5), error);
  CHECK_THROWS_AS((void)lower_bound_certificate(m, mass, p, -1.0, 0.0), error);
  try {
    (void)lower_bound_certificate(m, mass, p, -1.0, -0.2);
    FAIL("expected a throw");
  } catch (const error &e) {
    CHECK(e.code() == errc::epsilon_out_of_range);
  }

  // t = 1.2, w = 1: evaluation time t + c w turns negative below c = -1.2
  try {
    (void)lower_bound_certificate(m, mass, p, -2.0, 0.5);
    FAIL("expected a throw");
  } catch (const error &e) {
    CHECK(e.code() == errc::evaluation_time_negative);
  }
}

TEST_CASE("lower witness candidate set can be empty") {
  const auto m = build_mixture({{std::exp(1.0), 1.0}, {std::exp(3.0), 2.0}});
  const auto mass = cumulative_mass(m);
  auto p = cutoff_params(m, mass);
  // push the nominal location above every realized ratio; with epsilon small
  // enough the band [t - eps w, t] then misses both candidates
  p.t += 0.5;
  try {
    (void)lower_bound_certificate(m, mass, p, -0.4, 0.01);
    FAIL("expected a throw");
  } catch (const error &e) {
    CHECK(e.code() == errc::empty_i_star_set);
  }
}

TEST_CASE("upper bound in the leading-mass regime") {
  // a_1 = e^100, rho_1 = 1: ln A_1 = rho_1 t exactly
  const auto m = build_mixture_log({{100.0, 1.0}});
  const auto mass = cumulative_mass(m);
  const auto p = cutoff_params(m, mass);
  const auto cert = upper_bound_certificate(m, mass, p, 1.0);
  CHECK(cert.l_index == 1);
  CHECK(cert.C == 0.0);

  const double s = p.r + p.w;
  const double expect = -s + std::log(p.t / s) + std::log1p(s / p.t);
  CHECK(cert.log_bound == doctest::Approx(expect).epsilon(1e-12));
  CHECK(cert.log_bound == doctest::Approx(-0.83845456).epsilon(1e-6));

  // the certificate dominates the true distance at t + r + c w
  CHECK(evaluate(m, p.t + p.r + p.w) <= cert.log_bound);
}

TEST_CASE("upper bound in the split-mass regime") {
  const auto m = build_mixture({{std::exp(1.0), 1.0}, {std::exp(3.0), 2.0}});
  const auto mass = cumulative_mass(m);
  const auto p = cutoff_params(m, mass);
  // ln A_1 = 1 < rho_1 t = 1.563..., so mass first clears e^(rho_1 t) at l = 2
  const auto cert = upper_bound_certificate(m, mass, p, 0.75);
  CHECK(cert.l_index == 2);
  CHECK(cert.C > 0.0);

  const double s = p.r + 0.75 * p.w;
  const double term1 = -s * 1.0;
  const double term2 = std::log(p.t / s) - (s / p.t) * mass.log_A[0];
  CHECK(cert.log_bound ==
        doctest::Approx(logd::add(term1, term2)).epsilon(1e-12));
  CHECK(evaluate(m, p.t + p.r + 0.75 * p.w) <= cert.log_bound);

  CHECK_THROWS_AS((void)upper_bound_certificate(m, mass, p, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)upper_bound_certificate(m, mass, p, -1.0),
                  std::invalid_argument);
}

TEST_CASE("certificates sandwich the distance on random mixtures") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> lead(2.5, 30.0);
  std::uniform_real_distribution<double> other(-8.0, 30.0);
  std::uniform_real_distribution<double> rate0(0.1, 5.0);
  std::uniform_real_distribution<double> gap(0.1, 3.0);

  int lower_checked = 0;
  int upper_checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ExpTerm> terms;
    double rho = rate0(rng);
    const int k = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < k; ++i) {
      terms.push_back({i == 0 ? lead(rng) : other(rng), rho});
      rho += gap(rng);
    }
    const auto m = build_mixture_log(terms);
    const auto mass = cumulative_mass(m);
    const auto p = cutoff_params(m, mass);

    for (double c : {-1.5, -0.5}) {
      if (p.t + c * p.w <= 0.0) continue;
      const auto cert = lower_bound_certificate(m, mass, p, c);
      CHECK(cert.log_bound >= -c - cert.epsilon);
      CHECK(cert.log_bound <= evaluate(m, p.t + c * p.w) + 1e-9);
      ++lower_checked;
    }
    for (double c : {0.5, 2.0}) {
      const auto cert = upper_bound_certificate(m, mass, p, c);
      CHECK(evaluate(m, p.t + p.r + c * p.w) <= cert.log_bound + 1e-9);
      CHECK(cert.C >= 0.0);
      ++upper_checked;
    }
  }
  CHECK(lower_checked >= 80);
  CHECK(upper_checked == 100);
}

TEST_CASE("closed-form certificates match the generic path") {
  // leading-regime mixture where both code paths apply
  const auto m = build_mixture_log({{50.0, 2.0}, {-3.0, 5.0}});
  const auto mass = cumulative_mass(m);
  const auto p = cutoff_params(m, mass);
  REQUIRE(mass.log_A[0] == doctest::Approx(p.t * 2.0).epsilon(1e-12));

  const auto lg = lower_bound_certificate(m, mass, p, -1.0);
  const auto ll = lower_certificate_leading(p, 2.0, -1.0);
  CHECK(lg.i_star == 1);
  CHECK(ll.i_star == 1);
  CHECK(lg.log_bound == doctest::Approx(ll.log_bound).epsilon(1e-12));

  const auto ug = upper_bound_certificate(m, mass, p, 1.0);
  const auto ul = upper_certificate_leading(p, 2.0, 1.0);
  CHECK(ug.l_index == 1);
  CHECK(ul.l_index == 1);
  CHECK(ug.log_bound == doctest::Approx(ul.log_bound).epsilon(1e-12));
}

TEST_CASE("certificates are covariant under time rescaling") {
  const auto m = build_mixture_log({{20.0, 1.0}, {5.0, 2.0}, {-1.0, 3.5}});
  const auto m2 = scale_rates(m, 2.0);
  const auto pa = cutoff_params(m, cumulative_mass(m));
  const auto pb = cutoff_params(m2, cumulative_mass(m2));
  CHECK(pb.t == doctest::Approx(pa.t / 2.0).epsilon(1e-14));
  CHECK(pb.w == doctest::Approx(pa.w / 2.0).epsilon(1e-14));
  CHECK(pb.r == doctest::Approx(pa.r / 2.0).epsilon(1e-12));

  // offsets in units of w are scale-free, so log bounds agree
  const auto ua = upper_bound_certificate(m, cumulative_mass(m), pa, 1.0);
  const auto ub = upper_bound_certificate(m2, cumulative_mass(m2), pb, 1.0);
  CHECK(ua.log_bound == doctest::Approx(ub.log_bound).epsilon(1e-12));
}
