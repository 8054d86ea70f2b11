#pragma once

#include <vector>

#include "tauberlab/game.hpp"

namespace tauberlab {

// Bundled example games. The first three have closed-form value families
// and anchor the exact reproduction tests; the fourth has distinct
// absorbing limits, so its limit value is a genuinely non-constant
// function of the state; two seeded stochastic instances round out the
// convergence battery.

// s0 (cost 0) lets the maximizer stay or jump to the absorbing s1 (cost 1).
// V_n(s0) = (n-1)/n, W_mu(s0) = 1-mu, V_n(s1) = W_mu(s1) = 1.
inline GameInstance go_to_good() {
  GameInstance g;
  g.name = "go-to-good";
  g.states = {"s0", "s1"};
  g.max_actions = {{"stay", "go"}, {"loop"}};
  g.min_actions = {{"pass"}, {"pass"}};
  g.state_cost = {0.0, 1.0};
  g.transition = {
      {{{1.0, 0.0}}, {{0.0, 1.0}}},  // s0: stay -> s0, go -> s1
      {{{0.0, 1.0}}},                // s1: loop -> s1
  };
  return g;
}

// Both players pick a bit; matching moves to H (cost 1), mismatching to T
// (cost 0). Under the mixed stage value, V_n(H) = (n+1)/(2n) and
// W_mu(H) = (1+mu)/2.
inline GameInstance matching_pennies_chain() {
  GameInstance g;
  g.name = "matching-pennies-chain";
  g.states = {"H", "T"};
  g.max_actions = {{"0", "1"}, {"0", "1"}};
  g.min_actions = {{"0", "1"}, {"0", "1"}};
  g.state_cost = {1.0, 0.0};
  const std::vector<double> to_h = {1.0, 0.0};
  const std::vector<double> to_t = {0.0, 1.0};
  g.transition = {
      {{to_h, to_t}, {to_t, to_h}},
      {{to_h, to_t}, {to_t, to_h}},
  };
  return g;
}

// Constant running cost: every payoff normalizes to 1/2, all gaps vanish.
inline GameInstance constant_cost() {
  GameInstance g;
  g.name = "constant-cost";
  g.states = {"u", "v"};
  g.max_actions = {{"a0", "a1"}, {"a0"}};
  g.min_actions = {{"b0"}, {"b0", "b1"}};
  g.state_cost = {0.5, 0.5};
  g.transition = {
      {{{0.0, 1.0}}, {{1.0, 0.0}}},
      {{{1.0, 0.0}, {0.5, 0.5}}},
  };
  return g;
}

// Two absorbing states with opposite costs plus one chooser state per
// player. Limit values are 1, 0, 1, 0: agreement of the two families is
// per-state, not through a constant.
inline GameInstance two_absorbing() {
  GameInstance g;
  g.name = "two-absorbing";
  g.states = {"hi", "lo", "max-picks", "min-picks"};
  g.max_actions = {{"loop"}, {"loop"}, {"to-hi", "to-lo"}, {"wait"}};
  g.min_actions = {{"pass"}, {"pass"}, {"pass"}, {"to-hi", "to-lo"}};
  g.state_cost = {1.0, 0.0, 0.5, 0.5};
  const std::vector<double> at_hi = {1.0, 0.0, 0.0, 0.0};
  const std::vector<double> at_lo = {0.0, 1.0, 0.0, 0.0};
  g.transition = {
      {{at_hi}},
      {{at_lo}},
      {{at_hi}, {at_lo}},
      {{at_hi, at_lo}},
  };
  return g;
}

inline std::vector<GameInstance> bundled_games() {
  return {
      go_to_good(),
      matching_pennies_chain(),
      constant_cost(),
      two_absorbing(),
      random_game(3, 2, 2, 101, false),
      random_game(3, 2, 2, 202, false),
  };
}

}  // namespace tauberlab
