#include <doctest.h>

#include <cutoff/errors.hpp>
#include <cutoff/mixture.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace cutoff;

namespace {

// straightforward linear-space reference, only usable for tame magnitudes
double linear_eval(const std::vector<std::pair<double, double>> &terms,
                   double t) {
  double acc = 0.0;
  for (const auto &[a, rho] : terms) acc += a * std::exp(-rho * t);
  return std::log(acc);
}

} // namespace

TEST_CASE("build_mixture sorts and merges terms") {
  const auto m = build_mixture({{0.5, 3.0}, {2.0, 1.0}, {0.25, 3.0}});
  REQUIRE(m.size() == 2);
  CHECK(m.term(0).rho == 1.0);
  CHECK(m.term(0).log_a == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(m.term(1).rho == 3.0);
  CHECK(m.term(1).log_a == doctest::Approx(std::log(0.75)).epsilon(1e-15));
}

TEST_CASE("build_mixture rejects malformed inputs") {
  CHECK_THROWS_AS((void)build_mixture({}), error);
  CHECK_THROWS_AS((void)build_mixture({{1.0, 0.0}}), error);
  CHECK_THROWS_AS((void)build_mixture({{1.0, -2.0}}), error);
  CHECK_THROWS_AS((void)build_mixture({{0.0, 1.0}, {1.0, 2.0}}), error);

  try {
    (void)build_mixture({});
    FAIL("expected a throw");
  } catch (const error &e) {
    CHECK(e.code() == errc::empty_mixture);
  }
  try {
    (void)build_mixture({{1.0, -2.0}});
    FAIL("expected a throw");
  } catch (const error &e) {
    CHECK(e.code() == errc::nonpositive_rate);
  }
  try {
    (void)build_mixture({{0.0, 1.0}, {1.0, 2.0}});
    FAIL("expected a throw");
  } catch (const error &e) {
    CHECK(e.code() == errc::leading_coefficient_zero);
  }
}

TEST_CASE("zero coefficients are legal past the leading term") {
  const auto m = build_mixture({{1.0, 1.0}, {0.0, 2.0}});
  REQUIRE(m.size() == 2);
  CHECK(logd::is_zero(m.term(1).log_a));
  CHECK(evaluate(m, 0.7) == doctest::Approx(-0.7).epsilon(1e-15));
}

TEST_CASE("cumulative masses clamp at one") {
  SUBCASE("sub-unit prefix sums clamp to log A = 0") {
    const auto m = build_mixture({{0.5, 1.0}, {0.3, 2.0}});
    const auto mass = cumulative_mass(m);
    REQUIRE(mass.log_A.size() == 2);
    CHECK(mass.log_A[0] == 0.0);
    CHECK(mass.log_A[1] == 0.0);
  }
  SUBCASE("super-unit prefixes track the running sum") {
    const auto m = build_mixture({{std::exp(1.0), 1.0}, {std::exp(3.0), 2.0}});
    const auto mass = cumulative_mass(m);
    REQUIRE(mass.log_A.size() == 2);
    CHECK(mass.log_A[0] == doctest::Approx(1.0).epsilon(1e-15));
    const double expect = std::log(std::exp(1.0) + std::exp(3.0));
    CHECK(mass.log_A[1] == doctest::Approx(expect).epsilon(1e-14));
    CHECK(expect == doctest::Approx(3.126928011).epsilon(1e-9));
  }
  SUBCASE("mixed prefixes can plateau then grow") {
    const auto m = build_mixture({{2.0, 1.0}, {0.0, 2.0}, {3.0, 3.0}});
    const auto mass = cumulative_mass(m);
    REQUIRE(mass.log_A.size() == 3);
    CHECK(mass.log_A[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(mass.log_A[1] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(mass.log_A[2] == doctest::Approx(std::log(5.0)).epsilon(1e-15));
  }
}

TEST_CASE("evaluate agrees with linear arithmetic on tame inputs") {
  CHECK(evaluate(build_mixture({{2.0, 1.0}}), 0.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(evaluate(build_mixture({{std::exp(1.0), 1.0}}), 1.0) ==
        doctest::Approx(0.0).epsilon(1e-15));

  // 3-dimensional hypercube walk distance: terms (3,2), (3,4), (1,6)
  const std::vector<std::pair<double, double>> cube{{3.0, 2.0}, {3.0, 4.0}, {1.0, 6.0}};
  const auto m = build_mixture(cube);
  for (double t : {0.0, 0.25, 0.549306, 1.0, 2.5}) {
    CHECK(evaluate(m, t) == doctest::Approx(linear_eval(cube, t)).epsilon(1e-12));
  }
}

TEST_CASE("evaluate handles magnitudes past linear overflow") {
  const auto m = build_mixture_log({{1000.0, 1.0}, {-1000.0, 2.0}});
  CHECK(evaluate(m, 0.0) == doctest::Approx(1000.0).epsilon(1e-15));
  // at t = 1000 the lead exponent is exactly 0 and the tail is e^(-3000)
  CHECK(evaluate(m, 1000.0) == doctest::Approx(0.0).epsilon(1e-15));
  // at t = -500 the lead exponent is 1500 and the tail exponent is exactly 0
  CHECK(evaluate(m, -500.0) == doctest::Approx(1500.0).epsilon(1e-15));
}

TEST_CASE("evaluate is strictly decreasing in t") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coeff(0.1, 5.0);
  std::uniform_real_distribution<double> gap(0.1, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::pair<double, double>> terms;
    double rho = gap(rng);
    const int k = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < k; ++i) {
      terms.push_back({coeff(rng), rho});
      rho += gap(rng);
    }
    const auto m = build_mixture(terms);
    double prev = evaluate(m, -1.0);
    for (double t = -0.5; t < 4.0; t += 0.5) {
      const double cur = evaluate(m, t);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("scale_rates rescales time") {
  const auto m = build_mixture({{3.0, 0.5}, {1.0, 2.0}, {2.0, 7.0}});

  SUBCASE("power-of-two factors commute bitwise") {
    const auto m2 = scale_rates(m, 2.0);
    for (double t : {0.0, 0.3, 1.7, 9.0}) {
      CHECK(evaluate(m2, t) == evaluate(m, 2.0 * t));
    }
  }
  SUBCASE("generic factors commute to rounding") {
    const auto m17 = scale_rates(m, 1.7);
    for (double t : {0.0, 0.3, 1.7, 9.0}) {
      CHECK(evaluate(m17, t) == doctest::Approx(evaluate(m, 1.7 * t)).epsilon(1e-12));
    }
  }
  SUBCASE("nonpositive factors are rejected") {
    CHECK_THROWS_AS((void)scale_rates(m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)scale_rates(m, -1.0), std::invalid_argument);
  }
}

TEST_CASE("tensor_sum adds distances of independent coordinates") {
  const auto a = build_mixture({{2.0, 1.0}, {1.0, 3.0}});
  const auto b = build_mixture({{0.5, 1.0}, {4.0, 2.5}});
  const auto ab = tensor_sum(a, b);
  REQUIRE(ab.size() == 3); // rate 1.0 merges
  for (double t : {0.0, 0.4, 1.3, 3.0}) {
    const double expect = logd::add(evaluate(a, t), evaluate(b, t));
    CHECK(evaluate(ab, t) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("iid_sample multiplies every coefficient by n") {
  const auto m = build_mixture({{2.0, 1.0}, {1.0, 3.0}});
  const auto m5 = iid_sample(m, 5);
  REQUIRE(m5.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m5.term(i).rho == m.term(i).rho);
    CHECK(m5.term(i).log_a ==
          doctest::Approx(m.term(i).log_a + std::log(5.0)).epsilon(1e-15));
  }
  CHECK_THROWS_AS((void)iid_sample(m, 0), std::invalid_argument);
}

TEST_CASE("split_signed separates positive and negative parts") {
  SUBCASE("all-positive input has no minus part") {
    const auto s = split_signed({{2.0, 1.0}, {1.0, 3.0}});
    CHECK_FALSE(s.minus.has_value());
    CHECK(s.plus.size() == 2);
  }
  SUBCASE("signed input splits and reassembles") {
    const std::vector<std::pair<double, double>> terms{
        {3.0, 1.0}, {-1.0, 2.0}, {0.5, 4.0}};
    const auto s = split_signed(terms);
    REQUIRE(s.minus.has_value());
    CHECK(s.plus.size() == 2);
    CHECK(s.minus->size() == 1);
    CHECK(s.minus->term(0).rho == 2.0);
    for (double t : {0.0, 0.5, 2.0}) {
      const double recon =
          std::exp(evaluate(s.plus, t)) - std::exp(evaluate(*s.minus, t));
      double direct = 0.0;
      for (const auto &[a, rho] : terms) direct += a * std::exp(-rho * t);
      CHECK(recon == doctest::Approx(direct).epsilon(1e-12));
    }
  }
  SUBCASE("sides are split strictly by sign, never against each other") {
    const auto s = split_signed({{2.0, 1.0}, {1.0, 2.0}, {-1.0, 2.0}});
    REQUIRE(s.minus.has_value());
    CHECK(s.plus.size() == 2);
    CHECK(s.minus->size() == 1);
    // the shared rate keeps a term on each side; reassembly still cancels it
    for (double t : {0.0, 0.8}) {
      const double recon =
          std::exp(evaluate(s.plus, t)) - std::exp(evaluate(*s.minus, t));
      CHECK(recon == doctest::Approx(2.0 * std::exp(-t)).epsilon(1e-12));
    }
  }
  SUBCASE("a negative leading coefficient moves to the minus side") {
    const auto s = split_signed({{-1.0, 1.0}, {2.0, 2.0}});
    REQUIRE(s.minus.has_value());
    REQUIRE(s.plus.size() == 1);
    CHECK(s.plus.term(0).rho == 2.0);
    CHECK(s.plus.term(0).log_a == doctest::Approx(std::log(2.0)));
    CHECK(s.minus->term(0).rho == 1.0);
  }
  SUBCASE("an all-negative tail leaves the plus side leading-term valid") {
    const auto s = split_signed({{2.0, 1.0}, {-1.0, 2.0}, {3.0, 3.0}});
    REQUIRE(s.minus.has_value());
    CHECK(s.plus.size() == 2);
    CHECK(s.minus->size() == 1);
    CHECK(s.minus->term(0).rho == 2.0);
    CHECK(s.minus->term(0).log_a == doctest::Approx(0.0));
  }
}

TEST_CASE("log and linear construction agree") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coeff(0.05, 20.0);
  std::uniform_real_distribution<double> gap(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, double>> lin;
    std::vector<ExpTerm> lg;
    double rho = gap(rng);
    const int k = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < k; ++i) {
      const double a = coeff(rng);
      lin.push_back({a, rho});
      lg.push_back({std::log(a), rho});
      rho += gap(rng);
    }
    const auto ma = build_mixture(lin);
    const auto mb = build_mixture_log(lg);
    REQUIRE(ma.size() == mb.size());
    for (std::size_t i = 0; i < ma.size(); ++i) {
      CHECK(ma.term(i).log_a == doctest::Approx(mb.term(i).log_a).epsilon(1e-12));
      CHECK(ma.term(i).rho == mb.term(i).rho);
    }
  }
}
