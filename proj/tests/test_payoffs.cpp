#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tauberlab/payoffs.hpp"
#include "tauberlab/prng.hpp"

using namespace tauberlab;

namespace {

// Truncation oracle, structurally independent of the closed-form path:
// term-by-term weights, no lasso algebra. The tail of the true series is
// bounded by (1-mu)^N since the cost stays in [0,1].
double truncated_discrete_abel(const std::vector<double>& cost, const LassoProcess& z, double mu,
                               long terms) {
  double acc = 0.0;
  double w = mu;
  for (long t = 0; t < terms; ++t) {
    acc += w * cost[static_cast<std::size_t>(state_at_step(z, static_cast<std::size_t>(t)))];
    w *= (1.0 - mu);
  }
  return acc;
}

LassoProcess random_lasso(SplitMix64& rng, int n_states) {
  LassoProcess z;
  const auto plen = rng.next_below(5);
  for (std::uint64_t i = 0; i < plen; ++i)
    z.prefix.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_states))));
  const auto clen = 1 + rng.next_below(5);
  for (std::uint64_t i = 0; i < clen; ++i)
    z.cycle.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_states))));
  return z;
}

std::vector<double> random_cost(SplitMix64& rng, int n_states) {
  std::vector<double> c(static_cast<std::size_t>(n_states));
  for (double& x : c) x = rng.next_double();
  return c;
}

}  // namespace

TEST_CASE("rate/probability conversion") {
  CHECK(discount_to_prob(std::log(2.0)) == Catch::Approx(0.5).margin(1e-15));
  CHECK(prob_to_discount(discount_to_prob(0.3)) == Catch::Approx(0.3).epsilon(1e-14));
  CHECK(discount_to_prob(prob_to_discount(0.3)) == Catch::Approx(0.3).epsilon(1e-14));
  const double tiny = discount_to_prob(1e-6);
  CHECK(std::fabs(tiny - 1e-6) / 1e-6 < 1e-6);
  CHECK_THROWS_AS(discount_to_prob(0.0), std::invalid_argument);
  CHECK_THROWS_AS(discount_to_prob(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(prob_to_discount(0.0), std::invalid_argument);
  CHECK_THROWS_AS(prob_to_discount(1.0), std::invalid_argument);
}

TEST_CASE("time average on lassos") {
  const std::vector<double> cost{0.0, 1.0};
  SECTION("constant integrand") {
    const std::vector<double> c{0.37};
    const LassoProcess z{{}, {0}};
    for (double T : {0.5, 1.0, 2.75, 100.0}) CHECK(cesaro_value(c, z, T) == Catch::Approx(0.37));
  }
  SECTION("alternating cycle at even horizon") {
    const LassoProcess z{{}, {0, 1}};
    CHECK(cesaro_value(cost, z, 2.0) == 0.5);
  }
  SECTION("zero prefix then ones: (0+1+1+1)/4") {
    const LassoProcess z{{0}, {1}};
    CHECK(cesaro_value(cost, z, 4.0) == 0.75);
  }
  SECTION("fractional horizon weights the partial step") {
    const LassoProcess z{{0}, {1}};
    // (0 + 1 + 0.5 * 1) / 2.5
    CHECK(cesaro_value(cost, z, 2.5) == Catch::Approx(1.5 / 2.5).margin(1e-15));
  }
  CHECK_THROWS_AS(cesaro_value(cost, LassoProcess{{}, {0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cesaro_value(cost, LassoProcess{{}, {0}}, -1.0), std::invalid_argument);
}

TEST_CASE("stage average") {
  const std::vector<double> cost{0.0, 1.0, 0.2, 0.4, 0.9};
  CHECK(discrete_cesaro(cost, LassoProcess{{1}, {0}}, 1) == 1.0);
  CHECK(discrete_cesaro(cost, LassoProcess{{}, {0, 1}}, 4) == 0.5);
  CHECK(discrete_cesaro(cost, LassoProcess{{}, {2, 3, 4}}, 3) == Catch::Approx(0.5).margin(1e-15));
  CHECK_THROWS_AS(discrete_cesaro(cost, LassoProcess{{}, {0}}, 0), std::invalid_argument);
}

TEST_CASE("compensated summation keeps long horizons exact") {
  const std::vector<double> cost{0.1, 0.7, 0.4};
  const LassoProcess z{{}, {0, 1, 2}};
  // 10^5 stage terms; the cycle average is exactly 0.4
  CHECK(discrete_cesaro(cost, z, 99999) == Catch::Approx(0.4).margin(1e-12));
  CHECK(cesaro_value(cost, z, 99999.0) == Catch::Approx(0.4).margin(1e-12));
}

TEST_CASE("integer-horizon time average equals the stage average") {
  SplitMix64 rng(11);
  const auto cost = random_cost(rng, 6);
  for (int trial = 0; trial < 40; ++trial) {
    const LassoProcess z = random_lasso(rng, 6);
    const long n = 1 + static_cast<long>(rng.next_below(40));
    CHECK(cesaro_value(cost, z, static_cast<double>(n)) ==
          Catch::Approx(discrete_cesaro(cost, z, n)).margin(1e-14));
  }
}

TEST_CASE("discounted average on lassos") {
  const std::vector<double> cost{0.0, 1.0};
  SECTION("constant cost normalizes away the weights") {
    const std::vector<double> c{0.37};
    const LassoProcess z{{}, {0}};
    for (double lam : {1e-5, 0.1, 1.0, 5.0})
      CHECK(abel_value(c, z, lam) == Catch::Approx(0.37).margin(1e-13));
  }
  SECTION("alternating cycle: (1-mu)/(2-mu)") {
    const LassoProcess z{{}, {0, 1}};
    for (double mu : {0.01, 0.25, 0.5, 0.9})
      CHECK(discrete_abel(cost, z, mu) ==
            Catch::Approx((1.0 - mu) / (2.0 - mu)).margin(1e-14));
    CHECK(abel_value(cost, z, std::log(2.0)) == Catch::Approx(1.0 / 3.0).margin(1e-14));
  }
  SECTION("single weighted prefix term: value = mu") {
    const LassoProcess z{{1}, {0}};
    for (double lam : {0.05, 0.7, 2.0})
      CHECK(abel_value(cost, z, lam) ==
            Catch::Approx(-std::expm1(-lam)).margin(1e-15));
  }
  CHECK_THROWS_AS(abel_value(cost, LassoProcess{{}, {0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(discrete_abel(cost, LassoProcess{{}, {0}}, 1.0), std::invalid_argument);
}

TEST_CASE("closed form matches the truncated series with tail bound") {
  SplitMix64 rng(23);
  const long terms = 10000;
  for (int trial = 0; trial < 60; ++trial) {
    const auto cost = random_cost(rng, 5);
    const LassoProcess z = random_lasso(rng, 5);
    const double lambda = 0.001 + 3.0 * rng.next_double();
    const double mu = discount_to_prob(lambda);
    const double tail = std::pow(1.0 - mu, static_cast<double>(terms));
    const double closed = abel_value(cost, z, lambda);
    const double truncated = truncated_discrete_abel(cost, z, mu, terms);
    CHECK(std::fabs(closed - truncated) <= tail + 1e-12);
  }
}

TEST_CASE("base payoffs stay within [0,1]") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto cost = random_cost(rng, 4);
    const LassoProcess z = random_lasso(rng, 4);
    const double T = 0.1 + 50.0 * rng.next_double();
    const double lambda = 0.01 + 2.0 * rng.next_double();
    const long n = 1 + static_cast<long>(rng.next_below(64));
    const double mu = 0.01 + 0.98 * rng.next_double();
    for (double v : {cesaro_value(cost, z, T), abel_value(cost, z, lambda),
                     discrete_cesaro(cost, z, n), discrete_abel(cost, z, mu)}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("composite payoffs") {
  const std::vector<double> cost{0.8, 0.3};
  SECTION("zero tail halves the first stage cost") {
    const ValueFunction zero{std::vector<double>{0.0, 0.0}, 0.0, 1.0};
    const LassoProcess z{{}, {0, 1}};
    CHECK(composite_value(cost, z, Zeta{zero, 1, 1.0}) == Catch::Approx(0.4).margin(1e-15));
  }
  SECTION("unit tail under the discount flavor") {
    const ValueFunction one{std::vector<double>{1.0, 1.0}, 0.0, 1.0};
    const LassoProcess z{{}, {0, 1}};
    for (double lam : {0.2, 1.0}) {
      const double mu = discount_to_prob(lam);
      CHECK(composite_value(cost, z, Xi{one, 1, lam}) ==
            Catch::Approx(mu * 0.8 + (1.0 - mu)).margin(1e-15));
    }
  }
  SECTION("tail loaded with the trailing average reproduces the longer average") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      const auto c = random_cost(rng, 5);
      const LassoProcess z = random_lasso(rng, 5);
      const long h = 1 + static_cast<long>(rng.next_below(4));
      const long n = 1 + static_cast<long>(rng.next_below(8));
      // tail value at the reached state: average of n costs from step h on
      double tail_avg = 0.0;
      for (long t = h; t < h + n; ++t)
        tail_avg += c[static_cast<std::size_t>(state_at_step(z, static_cast<std::size_t>(t)))];
      tail_avg /= static_cast<double>(n);
      std::vector<double> tail(5, 0.0);
      tail[static_cast<std::size_t>(state_at_step(z, static_cast<std::size_t>(h)))] = tail_avg;
      const double composed =
          composite_value(c, z, Zeta{ValueFunction{tail, 0.0, 1.0}, h, static_cast<double>(n)});
      CHECK(composed == Catch::Approx(discrete_cesaro(c, z, n + h)).margin(1e-13));
    }
  }
  SECTION("parameter validation") {
    const ValueFunction vf{std::vector<double>{0.0, 0.0}, 0.0, 1.0};
    const LassoProcess z{{}, {0}};
    CHECK_THROWS_AS(composite_value(cost, z, Zeta{vf, 0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(composite_value(cost, z, Zeta{vf, 1, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(composite_value(cost, z, Xi{vf, 0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(composite_value(cost, z, Xi{vf, 1, -1.0}), std::invalid_argument);
  }
}

TEST_CASE("payoff-level scaling estimates") {
  SplitMix64 rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    const auto cost = random_cost(rng, 4);
    const LassoProcess z = random_lasso(rng, 4);
    const double r = 1.0 + rng.next_double();  // r in (1, 2]
    const double T = 0.5 + 30.0 * rng.next_double();
    CHECK(std::fabs(cesaro_value(cost, z, T) - cesaro_value(cost, z, r * T)) <=
          2.0 * (r - 1.0) + 1e-14);
    const double lambda = 0.02 + 2.0 * rng.next_double();
    CHECK(std::fabs(abel_value(cost, z, lambda) - abel_value(cost, z, r * lambda)) <=
          2.0 * (r - 1.0) + 1e-14);
  }
}

TEST_CASE("payoff evaluation dispatch and guards") {
  const std::vector<double> cost{0.25, 0.75};
  const LassoProcess z{{0}, {1}};
  CHECK(evaluate_payoff(cost, z, PayoffSpec{DiscreteCesaro{2}}) ==
        Catch::Approx(0.5).margin(1e-15));
  CHECK(evaluate_payoff(cost, z, PayoffSpec{Cesaro{2.0}}) == Catch::Approx(0.5).margin(1e-15));

  GameInstance action_cost_game;
  action_cost_game.name = "gen";
  action_cost_game.states = {"s"};
  action_cost_game.max_actions = {{"a"}};
  action_cost_game.min_actions = {{"b"}};
  action_cost_game.action_cost = true;
  action_cost_game.cost_tables = {{{0.5}}};
  action_cost_game.transition = {{{{1.0}}}};
  CHECK_THROWS_AS(evaluate_payoff(action_cost_game, z, PayoffSpec{DiscreteCesaro{1}}),
                  std::invalid_argument);
}
