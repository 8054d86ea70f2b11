#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tauberlab/prng.hpp"

namespace tauberlab {

using Matrix = std::vector<std::vector<double>>;  // [max_action][min_action]

// Moderate-precision number formatting for diagnostics ("sums to 1.1"
// rather than "sums to 1.0999999999999999"). CSV output uses the exact
// shortest round-trip form instead, see report.hpp.
inline std::string diag_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : std::runtime_error(issues.empty() ? "invalid game" : issues.front()),
        issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Finite zero-sum Markov game: states, per-state rule sets for both sides,
// a running cost and a stochastic one-step transition kernel. The running
// cost is state-only by default; the action-dependent form is accepted as a
// flagged generalization and only ever enters through the stage tables.
struct GameInstance {
  std::string name;
  std::vector<std::string> states;
  std::vector<std::vector<std::string>> max_actions;  // per state
  std::vector<std::vector<std::string>> min_actions;  // per state
  bool action_cost = false;
  std::vector<double> state_cost;    // when !action_cost
  std::vector<Matrix> cost_tables;   // when action_cost, per state
  // transition[s][a][b] is a dense distribution over states
  std::vector<std::vector<std::vector<std::vector<double>>>> transition;

  std::size_t num_states() const { return states.size(); }

  double cost(std::size_t s) const {
    if (action_cost) throw std::logic_error("state-only cost requested on action-cost game");
    return state_cost[s];
  }
  double cost(std::size_t s, std::size_t a, std::size_t b) const {
    return action_cost ? cost_tables[s][a][b] : state_cost[s];
  }

  int state_index(std::string_view id) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == id) return static_cast<int>(i);
    return -1;
  }

  double cost_lo() const {
    double lo = 1.0;
    if (action_cost) {
      for (const auto& tbl : cost_tables)
        for (const auto& row : tbl)
          for (double c : row) lo = std::min(lo, c);
    } else {
      for (double c : state_cost) lo = std::min(lo, c);
    }
    return lo;
  }
  double cost_hi() const {
    double hi = 0.0;
    if (action_cost) {
      for (const auto& tbl : cost_tables)
        for (const auto& row : tbl)
          for (double c : row) hi = std::max(hi, c);
    } else {
      for (double c : state_cost) hi = std::max(hi, c);
    }
    return hi;
  }
};

// Bounded real-valued map over the game's states, together with the
// declared interval holding every value.
struct ValueFunction {
  std::vector<double> values;
  double lo = 0.0;
  double hi = 1.0;
};

// Builds a ValueFunction with declared bounds [lo, hi]. Computed values may
// overshoot the mathematical range by accumulated rounding (and fixed-point
// iterates additionally by their stopping tolerance, passed as extra_slack);
// such values are clamped, anything further out is a hard error.
inline ValueFunction make_value_function(std::vector<double> vals, double lo, double hi,
                                         double extra_slack = 0.0) {
  const double scale = std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));
  const double slack = 1e-12 * scale + extra_slack;
  for (double& v : vals) {
    if (v < lo - slack || v > hi + slack)
      throw std::logic_error("value " + diag_num(v) + " escapes declared bounds [" +
                             diag_num(lo) + ", " + diag_num(hi) + "]");
    v = std::clamp(v, lo, hi);
  }
  return ValueFunction{std::move(vals), lo, hi};
}

inline bool within_bounds(const ValueFunction& f) {
  return std::all_of(f.values.begin(), f.values.end(),
                     [&](double v) { return v >= f.lo && v <= f.hi; });
}

inline double sup_distance(const ValueFunction& a, const ValueFunction& b) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("sup_distance: mismatched domains");
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    d = std::max(d, std::fabs(a.values[i] - b.values[i]));
  return d;
}

// max over states of (a - b); one-sided counterpart of sup_distance
inline double sup_signed_excess(const ValueFunction& a, const ValueFunction& b) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("sup_signed_excess: mismatched domains");
  double d = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.values.size(); ++i)
    d = std::max(d, a.values[i] - b.values[i]);
  return d;
}

// ---------------------------------------------------------------------------
// Validation

inline std::vector<std::string> validation_issues(const GameInstance& g) {
  std::vector<std::string> issues;
  const std::size_t n = g.states.size();
  if (n == 0) {
    issues.push_back("game has no states");
    return issues;
  }
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t)
      if (g.states[s] == g.states[t])
        issues.push_back("duplicate state id '" + g.states[s] + "'");

  if (g.max_actions.size() != n || g.min_actions.size() != n) {
    issues.push_back("action sets not defined for every state");
    return issues;
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (g.max_actions[s].empty())
      issues.push_back("empty max action set at state " + g.states[s]);
    if (g.min_actions[s].empty())
      issues.push_back("empty min action set at state " + g.states[s]);
    for (const auto* side : {&g.max_actions[s], &g.min_actions[s]})
      for (std::size_t a = 0; a < side->size(); ++a)
        for (std::size_t b = a + 1; b < side->size(); ++b)
          if ((*side)[a] == (*side)[b])
            issues.push_back("duplicate action id '" + (*side)[a] + "' at state " + g.states[s]);
  }

  if (g.action_cost) {
    if (g.cost_tables.size() != n) {
      issues.push_back("cost not defined for every state");
    } else {
      for (std::size_t s = 0; s < n; ++s) {
        const auto& tbl = g.cost_tables[s];
        if (tbl.size() != g.max_actions[s].size()) {
          issues.push_back("cost table shape mismatch at state " + g.states[s]);
          continue;
        }
        for (std::size_t a = 0; a < tbl.size(); ++a) {
          if (tbl[a].size() != g.min_actions[s].size()) {
            issues.push_back("cost table shape mismatch at state " + g.states[s]);
            break;
          }
          for (std::size_t b = 0; b < tbl[a].size(); ++b)
            if (!(tbl[a][b] >= 0.0 && tbl[a][b] <= 1.0))
              issues.push_back("cost out of range [0,1] at (state=" + g.states[s] +
                               ", max=" + g.max_actions[s][a] + ", min=" + g.min_actions[s][b] +
                               "): " + diag_num(tbl[a][b]));
        }
      }
    }
  } else {
    if (g.state_cost.size() != n) {
      issues.push_back("cost not defined for every state");
    } else {
      for (std::size_t s = 0; s < n; ++s)
        if (!(g.state_cost[s] >= 0.0 && g.state_cost[s] <= 1.0))
          issues.push_back("cost out of range [0,1] at state " + g.states[s] + ": " +
                           diag_num(g.state_cost[s]));
    }
  }

  if (g.transition.size() != n) {
    issues.push_back("transition kernel not defined for every state");
    return issues;
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (g.transition[s].size() != g.max_actions[s].size()) {
      issues.push_back("missing transition entry at state " + g.states[s]);
      continue;
    }
    for (std::size_t a = 0; a < g.max_actions[s].size(); ++a) {
      if (g.transition[s][a].size() != g.min_actions[s].size()) {
        issues.push_back("missing transition entry at (state=" + g.states[s] +
                         ", max=" + g.max_actions[s][a] + ")");
        continue;
      }
      for (std::size_t b = 0; b < g.min_actions[s].size(); ++b) {
        const auto& dist = g.transition[s][a][b];
        const std::string where = "(state=" + g.states[s] + ", max=" + g.max_actions[s][a] +
                                  ", min=" + g.min_actions[s][b] + ")";
        if (dist.size() != n) {
          issues.push_back("missing transition entry at " + where);
          continue;
        }
        double sum = 0.0;
        bool negative = false;
        for (double p : dist) {
          if (p < 0.0) negative = true;
          sum += p;
        }
        if (negative) issues.push_back("negative transition probability at " + where);
        if (std::fabs(sum - 1.0) > 1e-12)
          issues.push_back("distribution sums to " + diag_num(sum) + " at " + where);
      }
    }
  }
  return issues;
}

inline void ensure_valid(const GameInstance& g) {
  auto issues = validation_issues(g);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

// ---------------------------------------------------------------------------
// JSON description format
//
// {
//   "name": "...",
//   "states": ["s0", "s1"],
//   "cost": {"s0": 0.5, ...}                 state-only form
//         | {"s0": {"a0": {"b0": 0.5}}, ...} generalized form
//   "actions": {"s0": {"max": ["a0"], "min": ["b0"]}, ...},
//   "transitions": {"s0": {"a0": {"b0": {"s0": 1.0}}}, ...}
// }
//
// Omitted target states mean probability zero. State and action order is
// declaration order and is canonical for iteration and tie-breaking.

inline GameInstance game_from_json(const nlohmann::json& j) {
  std::vector<std::string> issues;
  GameInstance g;
  if (!j.is_object()) throw ValidationError({"game description must be a JSON object"});
  g.name = j.value("name", "");
  if (!j.contains("states") || !j.at("states").is_array())
    throw ValidationError({"missing or malformed 'states' array"});
  for (const auto& s : j.at("states")) g.states.push_back(s.get<std::string>());
  const std::size_t n = g.states.size();
  if (n == 0) throw ValidationError({"game has no states"});

  auto index_of = [&](const std::string& id) {
    return g.state_index(id);
  };

  if (!j.contains("actions") || !j.at("actions").is_object())
    throw ValidationError({"missing or malformed 'actions' object"});
  g.max_actions.resize(n);
  g.min_actions.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (!j.at("actions").contains(g.states[s])) {
      issues.push_back("no actions declared for state " + g.states[s]);
      continue;
    }
    const auto& as = j.at("actions").at(g.states[s]);
    for (const auto& a : as.value("max", nlohmann::json::array()))
      g.max_actions[s].push_back(a.get<std::string>());
    for (const auto& b : as.value("min", nlohmann::json::array()))
      g.min_actions[s].push_back(b.get<std::string>());
  }

  if (!j.contains("cost") || !j.at("cost").is_object())
    throw ValidationError({"missing or malformed 'cost' object"});
  const auto& jc = j.at("cost");
  bool generalized = false;
  for (const auto& [k, v] : jc.items()) {
    (void)k;
    if (v.is_object()) generalized = true;
  }
  g.action_cost = generalized;
  if (generalized) {
    g.cost_tables.assign(n, {});
    for (std::size_t s = 0; s < n; ++s) {
      Matrix tbl(g.max_actions[s].size(),
                 std::vector<double>(g.min_actions[s].size(), -1.0));
      if (jc.contains(g.states[s]) && !jc.at(g.states[s]).is_object())
        issues.push_back("cost entry for state " + g.states[s] +
                         " must be an action table in generalized mode");
      else if (jc.contains(g.states[s])) {
        const auto& per_a = jc.at(g.states[s]);
        for (std::size_t a = 0; a < g.max_actions[s].size(); ++a)
          if (per_a.contains(g.max_actions[s][a]))
            for (std::size_t b = 0; b < g.min_actions[s].size(); ++b)
              if (per_a.at(g.max_actions[s][a]).contains(g.min_actions[s][b]))
                tbl[a][b] = per_a.at(g.max_actions[s][a]).at(g.min_actions[s][b]).get<double>();
      }
      g.cost_tables[s] = std::move(tbl);
    }
  } else {
    g.state_cost.assign(n, -1.0);  // out of range unless declared
    for (std::size_t s = 0; s < n; ++s)
      if (jc.contains(g.states[s])) g.state_cost[s] = jc.at(g.states[s]).get<double>();
  }

  g.transition.assign(n, {});
  if (!j.contains("transitions") || !j.at("transitions").is_object())
    throw ValidationError({"missing or malformed 'transitions' object"});
  const auto& jt = j.at("transitions");
  for (std::size_t s = 0; s < n; ++s) {
    auto& per_state = g.transition[s];
    per_state.resize(g.max_actions[s].size());
    for (std::size_t a = 0; a < g.max_actions[s].size(); ++a) {
      per_state[a].resize(g.min_actions[s].size());
      for (std::size_t b = 0; b < g.min_actions[s].size(); ++b) {
        const std::string where = "(state=" + g.states[s] + ", max=" + g.max_actions[s][a] +
                                  ", min=" + g.min_actions[s][b] + ")";
        if (!jt.contains(g.states[s]) || !jt.at(g.states[s]).contains(g.max_actions[s][a]) ||
            !jt.at(g.states[s]).at(g.max_actions[s][a]).contains(g.min_actions[s][b])) {
          issues.push_back("missing transition entry at " + where);
          per_state[a][b] = {};  // flagged by validation_issues as well
          continue;
        }
        std::vector<double> dist(n, 0.0);
        for (const auto& [target, p] :
             jt.at(g.states[s]).at(g.max_actions[s][a]).at(g.min_actions[s][b]).items()) {
          int t = index_of(target);
          if (t < 0) {
            issues.push_back("unknown target state '" + target + "' at " + where);
            continue;
          }
          dist[static_cast<std::size_t>(t)] = p.get<double>();
        }
        per_state[a][b] = std::move(dist);
      }
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return g;
}

// Parses and fully validates a raw description; throws ValidationError
// carrying one message per violated invariant, with coordinates.
inline GameInstance validate_game(const nlohmann::json& j) {
  GameInstance g = game_from_json(j);
  ensure_valid(g);
  return g;
}

inline GameInstance load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file: " + path);
  nlohmann::json j;
  in >> j;
  return validate_game(j);
}

inline nlohmann::ordered_json game_to_json(const GameInstance& g) {
  nlohmann::ordered_json j;
  j["name"] = g.name;
  j["states"] = g.states;
  nlohmann::ordered_json cost;
  if (g.action_cost) {
    for (std::size_t s = 0; s < g.num_states(); ++s) {
      nlohmann::ordered_json per_a;
      for (std::size_t a = 0; a < g.max_actions[s].size(); ++a) {
        nlohmann::ordered_json per_b;
        for (std::size_t b = 0; b < g.min_actions[s].size(); ++b)
          per_b[g.min_actions[s][b]] = g.cost_tables[s][a][b];
        per_a[g.max_actions[s][a]] = std::move(per_b);
      }
      cost[g.states[s]] = std::move(per_a);
    }
  } else {
    for (std::size_t s = 0; s < g.num_states(); ++s) cost[g.states[s]] = g.state_cost[s];
  }
  j["cost"] = std::move(cost);
  nlohmann::ordered_json actions;
  for (std::size_t s = 0; s < g.num_states(); ++s) {
    actions[g.states[s]] = {{"max", g.max_actions[s]}, {"min", g.min_actions[s]}};
  }
  j["actions"] = std::move(actions);
  nlohmann::ordered_json trans;
  for (std::size_t s = 0; s < g.num_states(); ++s) {
    nlohmann::ordered_json per_a;
    for (std::size_t a = 0; a < g.max_actions[s].size(); ++a) {
      nlohmann::ordered_json per_b;
      for (std::size_t b = 0; b < g.min_actions[s].size(); ++b) {
        nlohmann::ordered_json dist;
        for (std::size_t t = 0; t < g.num_states(); ++t)
          if (g.transition[s][a][b][t] != 0.0) dist[g.states[t]] = g.transition[s][a][b][t];
        per_b[g.min_actions[s][b]] = std::move(dist);
      }
      per_a[g.max_actions[s][a]] = std::move(per_b);
    }
    trans[g.states[s]] = std::move(per_a);
  }
  j["transitions"] = std::move(trans);
  return j;
}

// Canonical form used by the determinism contracts: declaration order for
// all keys, shortest round-trip number rendering (nlohmann's own dtoa).
inline std::string canonical_serialization(const GameInstance& g) {
  return game_to_json(g).dump();
}

// ---------------------------------------------------------------------------
// Seeded instance generation (splitmix64, documented draw order):
//   1. one cost draw per state, declaration order;
//   2. per (state, max-action, min-action) in lexicographic declaration
//      order: a point-mass target (next() mod S) when deterministic,
//      otherwise one weight 1 + u per target state, u in [0,1), normalized.
// Identifiers are s0..s{S-1}, a0.., b0..
inline GameInstance random_game(std::size_t n_states, std::size_t n_max_actions,
                                std::size_t n_min_actions, std::uint64_t seed,
                                bool deterministic) {
  if (n_states == 0 || n_max_actions == 0 || n_min_actions == 0)
    throw std::invalid_argument("random_game: all counts must be >= 1");
  GameInstance g;
  g.name = (deterministic ? "random-det-" : "random-sto-") + std::to_string(n_states) + "x" +
           std::to_string(n_max_actions) + "x" + std::to_string(n_min_actions) + "-seed" +
           std::to_string(seed);
  for (std::size_t s = 0; s < n_states; ++s) g.states.push_back("s" + std::to_string(s));
  g.max_actions.assign(n_states, {});
  g.min_actions.assign(n_states, {});
  for (std::size_t s = 0; s < n_states; ++s) {
    for (std::size_t a = 0; a < n_max_actions; ++a)
      g.max_actions[s].push_back("a" + std::to_string(a));
    for (std::size_t b = 0; b < n_min_actions; ++b)
      g.min_actions[s].push_back("b" + std::to_string(b));
  }

  SplitMix64 rng(seed);
  g.state_cost.resize(n_states);
  for (std::size_t s = 0; s < n_states; ++s) g.state_cost[s] = rng.next_double();

  g.transition.assign(n_states, {});
  for (std::size_t s = 0; s < n_states; ++s) {
    g.transition[s].assign(n_max_actions, {});
    for (std::size_t a = 0; a < n_max_actions; ++a) {
      g.transition[s][a].assign(n_min_actions, {});
      for (std::size_t b = 0; b < n_min_actions; ++b) {
        std::vector<double> dist(n_states, 0.0);
        if (deterministic) {
          dist[rng.next_below(n_states)] = 1.0;
        } else {
          double sum = 0.0;
          for (std::size_t t = 0; t < n_states; ++t) {
            dist[t] = 1.0 + rng.next_double();
            sum += dist[t];
          }
          for (std::size_t t = 0; t < n_states; ++t) dist[t] /= sum;
        }
        g.transition[s][a][b] = std::move(dist);
      }
    }
  }
  return g;
}

}  // namespace tauberlab
