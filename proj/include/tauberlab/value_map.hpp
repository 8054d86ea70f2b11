#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tauberlab/game.hpp"
#include "tauberlab/lasso.hpp"
#include "tauberlab/payoffs.hpp"
#include "tauberlab/solver.hpp"

namespace tauberlab {

// ---------------------------------------------------------------------------
// Explicit enumerative game forms: one initial state, finite rule sets, and
// an outcome map that sends each rule pair to a process (or to a finite
// distribution over processes). These realize the sup-inf value directly
// and serve as ground-truth oracles for the recursion-based maps.

struct LassoOutcome {
  double prob = 1.0;
  LassoProcess process;
};

struct ExplicitGameForm {
  int initial_state = 0;
  std::vector<std::string> max_rules;
  std::vector<std::string> min_rules;
  // outcomes[l][m]: finite support over processes; singleton == deterministic
  std::vector<std::vector<std::vector<LassoOutcome>>> outcomes;
};

inline std::vector<std::string> form_issues(const ExplicitGameForm& f) {
  std::vector<std::string> issues;
  if (f.max_rules.empty()) issues.push_back("empty max rule set");
  if (f.min_rules.empty()) issues.push_back("empty min rule set");
  if (f.outcomes.size() != f.max_rules.size()) {
    issues.push_back("outcome map missing rows");
    return issues;
  }
  for (std::size_t l = 0; l < f.max_rules.size(); ++l) {
    if (f.outcomes[l].size() != f.min_rules.size()) {
      issues.push_back("outcome map missing entries for rule " + f.max_rules[l]);
      continue;
    }
    for (std::size_t m = 0; m < f.min_rules.size(); ++m) {
      const auto& sup = f.outcomes[l][m];
      const std::string where = "(" + f.max_rules[l] + ", " + f.min_rules[m] + ")";
      if (sup.empty()) {
        issues.push_back("empty outcome support at " + where);
        continue;
      }
      double total = 0.0;
      for (const auto& o : sup) {
        total += o.prob;
        if (o.prob < 0.0) issues.push_back("negative outcome probability at " + where);
        if (!o.process.valid()) issues.push_back("outcome process has empty cycle at " + where);
        else if (state_at_step(o.process, 0) != f.initial_state)
          issues.push_back("outcome process does not start at the initial state at " + where);
      }
      if (std::fabs(total - 1.0) > 1e-12)
        issues.push_back("outcome distribution sums to " + diag_num(total) + " at " + where);
    }
  }
  return issues;
}

inline void ensure_valid(const ExplicitGameForm& f) {
  auto issues = form_issues(f);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

using ProcessPayoff = std::function<double(const LassoProcess&)>;

// sup over max rules of inf over min rules of the payoff on the generated
// process. Requires a deterministic outcome map; ties resolve to the first
// rule in declaration order.
inline double lower_value(const ExplicitGameForm& f, const ProcessPayoff& payoff,
                          int* achieving_l = nullptr, int* achieving_m = nullptr) {
  ensure_valid(f);
  double best = 0.0;
  int best_l = -1, best_m = -1;
  for (std::size_t l = 0; l < f.max_rules.size(); ++l) {
    double row_min = 0.0;
    int row_arg = -1;
    for (std::size_t m = 0; m < f.min_rules.size(); ++m) {
      if (f.outcomes[l][m].size() != 1)
        throw std::invalid_argument("lower_value requires a deterministic outcome map");
      const double v = payoff(f.outcomes[l][m][0].process);
      if (row_arg < 0 || v < row_min) {
        row_min = v;
        row_arg = static_cast<int>(m);
      }
    }
    if (best_l < 0 || row_min > best) {
      best = row_min;
      best_l = static_cast<int>(l);
      best_m = row_arg;
    }
  }
  if (achieving_l) *achieving_l = best_l;
  if (achieving_m) *achieving_m = best_m;
  return best;
}

// Stochastic variant: sup inf of the exact finite expectation.
inline double expected_lower_value(const ExplicitGameForm& f, const ProcessPayoff& payoff) {
  ensure_valid(f);
  double best = 0.0;
  bool first_row = true;
  for (std::size_t l = 0; l < f.max_rules.size(); ++l) {
    double row_min = 0.0;
    bool first_col = true;
    for (std::size_t m = 0; m < f.min_rules.size(); ++m) {
      double e = 0.0;
      for (const auto& o : f.outcomes[l][m]) e += o.prob * payoff(o.process);
      if (first_col || e < row_min) {
        row_min = e;
        first_col = false;
      }
    }
    if (first_row || row_min > best) {
      best = row_min;
      first_row = false;
    }
  }
  return best;
}

// JSON fixture loader; state names resolve against the supplied universe.
// {
//   "initial": "s0",
//   "rules": {"max": [...], "min": [...]},
//   "outcomes": {l: {m: {"prefix": [...], "cycle": [...]}
//                     | {"support": [{"prob": p, "prefix": [...], "cycle": [...]}, ...]}}}
// }
inline ExplicitGameForm form_from_json(const nlohmann::json& j,
                                       const std::vector<std::string>& states) {
  auto resolve = [&](const std::string& id) {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == id) return static_cast<int>(i);
    throw ValidationError({"unknown state '" + id + "' in game form"});
  };
  auto parse_lasso = [&](const nlohmann::json& jz) {
    LassoProcess z;
    for (const auto& s : jz.value("prefix", nlohmann::json::array()))
      z.prefix.push_back(resolve(s.get<std::string>()));
    for (const auto& s : jz.value("cycle", nlohmann::json::array()))
      z.cycle.push_back(resolve(s.get<std::string>()));
    return z;
  };
  ExplicitGameForm f;
  f.initial_state = resolve(j.at("initial").get<std::string>());
  for (const auto& r : j.at("rules").at("max")) f.max_rules.push_back(r.get<std::string>());
  for (const auto& r : j.at("rules").at("min")) f.min_rules.push_back(r.get<std::string>());
  f.outcomes.resize(f.max_rules.size());
  for (std::size_t l = 0; l < f.max_rules.size(); ++l) {
    f.outcomes[l].resize(f.min_rules.size());
    for (std::size_t m = 0; m < f.min_rules.size(); ++m) {
      const auto& jo = j.at("outcomes").at(f.max_rules[l]).at(f.min_rules[m]);
      if (jo.contains("support")) {
        for (const auto& o : jo.at("support"))
          f.outcomes[l][m].push_back({o.at("prob").get<double>(), parse_lasso(o)});
      } else {
        f.outcomes[l][m].push_back({1.0, parse_lasso(jo)});
      }
    }
  }
  ensure_valid(f);
  return f;
}

// ---------------------------------------------------------------------------
// Game value maps: payoff -> value function evaluators claiming affine
// covariance and monotonicity. Three instances ship: the DP map (recursion
// by construction), the enumerative map (brute-force sup-inf), and the
// control map (minimizer collapsed to its first rule).

class GameValueMap {
 public:
  using AcceptFn = std::function<bool(const GameInstance&, const PayoffSpec&)>;
  using EvalFn = std::function<ValueFunction(const GameInstance&, const PayoffSpec&)>;

  GameValueMap(std::string name, AcceptFn accepts, EvalFn eval)
      : name_(std::move(name)), accepts_(std::move(accepts)), eval_(std::move(eval)) {}

  const std::string& name() const { return name_; }

  bool accepts(const GameInstance& g, const PayoffSpec& p) const { return accepts_(g, p); }

  ValueFunction evaluate(const GameInstance& g, const PayoffSpec& p) const {
    if (!accepts_(g, p))
      throw std::invalid_argument("value map '" + name_ + "' does not accept payoff " +
                                  payoff_kind(p));
    ValueFunction out = eval_(g, p);
    if (out.values.size() != g.num_states())
      throw std::logic_error("value map '" + name_ + "' returned a wrong-domain value function");
    return out;
  }

 private:
  std::string name_;
  AcceptFn accepts_;
  EvalFn eval_;
};

inline GameValueMap make_dp_map(const StageMode& mode, double fixed_point_tol = 1e-12) {
  auto accepts = [](const GameInstance&, const PayoffSpec&) { return true; };
  auto eval = [mode, fixed_point_tol](const GameInstance& g, const PayoffSpec& p) {
    struct V {
      const GameInstance& g;
      const StageMode& mode;
      double tol;
      ValueFunction operator()(const Cesaro& s) const {
        return fractional_horizon_value(g, s.horizon, mode);
      }
      ValueFunction operator()(const DiscreteCesaro& s) const {
        return finite_horizon_values(g, s.steps, mode).back();
      }
      ValueFunction operator()(const Abel& s) const {
        return continuous_discounted_value(g, s.rate, tol, mode);
      }
      ValueFunction operator()(const DiscreteAbel& s) const {
        return discounted_values(g, s.stop_prob, tol, mode);
      }
      ValueFunction operator()(const Zeta& s) const {
        return propagate_zeta(g, s.tail, s.steps, s.horizon, mode);
      }
      ValueFunction operator()(const Xi& s) const {
        return propagate_xi(g, s.tail, s.steps, discount_to_prob(s.rate), mode);
      }
    };
    return std::visit(V{g, mode, fixed_point_tol}, p);
  };
  return GameValueMap("dp-" + mode_id(mode), accepts, eval);
}

inline GameValueMap make_enumerative_map(const BruteForceCaps& caps = {}) {
  auto accepts = [](const GameInstance&, const PayoffSpec& p) {
    return std::holds_alternative<DiscreteCesaro>(p);
  };
  auto eval = [caps](const GameInstance& g, const PayoffSpec& p) {
    return brute_force_value(g, std::get<DiscreteCesaro>(p).steps, caps);
  };
  return GameValueMap("enumerative", accepts, eval);
}

// Minimizer collapsed to its first declared rule: the control reading, a
// plain maximization over the induced decision process.
inline GameInstance restrict_to_first_min_action(const GameInstance& g) {
  GameInstance r = g;
  for (std::size_t s = 0; s < r.num_states(); ++s) {
    r.min_actions[s] = {g.min_actions[s].front()};
    for (std::size_t a = 0; a < r.max_actions[s].size(); ++a) {
      r.transition[s][a] = {g.transition[s][a].front()};
      if (r.action_cost) r.cost_tables[s][a] = {g.cost_tables[s][a].front()};
    }
  }
  return r;
}

inline GameValueMap make_control_map(const StageMode& mode, double fixed_point_tol = 1e-12) {
  GameValueMap dp = make_dp_map(mode, fixed_point_tol);
  auto accepts = [](const GameInstance&, const PayoffSpec&) { return true; };
  auto eval = [dp](const GameInstance& g, const PayoffSpec& p) {
    return dp.evaluate(restrict_to_first_min_action(g), p);
  };
  return GameValueMap("control-" + mode_id(mode), accepts, eval);
}

// ---------------------------------------------------------------------------
// Axiom checkers. The affine image A*c + B of a payoff is realized through
// the cost (and, for the composite payoffs, the tail): every payoff family
// here is an average of stage costs with weights summing to one, so
// transforming the cost transforms the payoff exactly.

inline GameInstance affine_cost_game(const GameInstance& g, double A, double B) {
  GameInstance r = g;
  if (r.action_cost) {
    for (auto& tbl : r.cost_tables)
      for (auto& row : tbl)
        for (double& c : row) c = A * c + B;
  } else {
    for (double& c : r.state_cost) c = A * c + B;
  }
  return r;
}

inline ValueFunction affine_values(const ValueFunction& f, double A, double B) {
  ValueFunction r = f;
  for (double& v : r.values) v = A * v + B;
  r.lo = A * f.lo + B;
  r.hi = A * f.hi + B;
  if (r.lo > r.hi) std::swap(r.lo, r.hi);
  return r;
}

inline PayoffSpec affine_payoff(const PayoffSpec& p, double A, double B) {
  if (const auto* z = std::get_if<Zeta>(&p))
    return Zeta{affine_values(z->tail, A, B), z->steps, z->horizon};
  if (const auto* x = std::get_if<Xi>(&p))
    return Xi{affine_values(x->tail, A, B), x->steps, x->rate};
  return p;
}

// max over states of |V[A c + B] - (A V[c] + B)|; passes when <= tol.
inline double check_affine(const GameValueMap& map, const GameInstance& g, const PayoffSpec& c,
                           double A, double B) {
  if (A < 0.0) throw std::invalid_argument("check_affine: A must be non-negative");
  const ValueFunction direct = map.evaluate(affine_cost_game(g, A, B), affine_payoff(c, A, B));
  const ValueFunction base = map.evaluate(g, c);
  double margin = 0.0;
  for (std::size_t s = 0; s < direct.values.size(); ++s)
    margin = std::max(margin, std::fabs(direct.values[s] - (A * base.values[s] + B)));
  return margin;
}

class DominanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline bool same_topology(const GameInstance& a, const GameInstance& b) {
  return a.states == b.states && a.max_actions == b.max_actions &&
         a.min_actions == b.min_actions && a.transition == b.transition &&
         a.action_cost == b.action_cost;
}
inline bool cost_dominated(const GameInstance& lo, const GameInstance& hi) {
  if (lo.action_cost) {
    for (std::size_t s = 0; s < lo.num_states(); ++s)
      for (std::size_t a = 0; a < lo.cost_tables[s].size(); ++a)
        for (std::size_t b = 0; b < lo.cost_tables[s][a].size(); ++b)
          if (lo.cost_tables[s][a][b] > hi.cost_tables[s][a][b]) return false;
    return true;
  }
  for (std::size_t s = 0; s < lo.num_states(); ++s)
    if (lo.state_cost[s] > hi.state_cost[s]) return false;
  return true;
}
inline bool tails_dominated(const ValueFunction& lo, const ValueFunction& hi) {
  if (lo.values.size() != hi.values.size()) return false;
  for (std::size_t s = 0; s < lo.values.size(); ++s)
    if (lo.values[s] > hi.values[s]) return false;
  return true;
}
// Structural certificate that the lower payoff is pointwise below the upper
// one on every process: identical family parameters, dominated stage data.
inline bool payoff_dominated(const PayoffSpec& lo, const PayoffSpec& hi) {
  if (lo.index() != hi.index()) return false;
  if (const auto* a = std::get_if<Cesaro>(&lo))
    return a->horizon == std::get<Cesaro>(hi).horizon;
  if (const auto* a = std::get_if<Abel>(&lo)) return a->rate == std::get<Abel>(hi).rate;
  if (const auto* a = std::get_if<DiscreteCesaro>(&lo))
    return a->steps == std::get<DiscreteCesaro>(hi).steps;
  if (const auto* a = std::get_if<DiscreteAbel>(&lo))
    return a->stop_prob == std::get<DiscreteAbel>(hi).stop_prob;
  if (const auto* a = std::get_if<Zeta>(&lo)) {
    const auto& b = std::get<Zeta>(hi);
    return a->steps == b.steps && a->horizon == b.horizon && tails_dominated(a->tail, b.tail);
  }
  const auto& a = std::get<Xi>(lo);
  const auto& b = std::get<Xi>(hi);
  return a.steps == b.steps && a.rate == b.rate && tails_dominated(a.tail, b.tail);
}
}  // namespace detail

// max over states of (V[c_lo] - V[c_hi]); passes when <= tol. The dominance
// c_lo <= c_hi must be certified structurally: same game topology, dominated
// stage costs, matching payoff parameters (dominated tails for composites).
inline double check_monotone(const GameValueMap& map, const GameInstance& g_lo,
                             const PayoffSpec& c_lo, const GameInstance& g_hi,
                             const PayoffSpec& c_hi) {
  if (!detail::same_topology(g_lo, g_hi) || !detail::cost_dominated(g_lo, g_hi) ||
      !detail::payoff_dominated(c_lo, c_hi))
    throw DominanceError("dominance certificate missing: payoffs are not structurally ordered");
  const ValueFunction lo = map.evaluate(g_lo, c_lo);
  const ValueFunction hi = map.evaluate(g_hi, c_hi);
  return sup_signed_excess(lo, hi);
}

}  // namespace tauberlab
