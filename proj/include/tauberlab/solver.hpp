#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tauberlab/game.hpp"
#include "tauberlab/payoffs.hpp"
#include "tauberlab/simplex.hpp"

namespace tauberlab {

// Stage operator flavor. PureMaximin follows the sequential move order of
// the lower game (maximizer announces, minimizer responds); MixedValue is
// the matrix-game value for the stochastic-game reading.
struct PureMaximin {};
struct MixedValue {
  double lp_tol = 1e-9;
};
using StageMode = std::variant<PureMaximin, MixedValue>;

inline bool is_mixed(const StageMode& m) { return std::holds_alternative<MixedValue>(m); }
inline std::string mode_id(const StageMode& m) { return is_mixed(m) ? "mixed" : "pure"; }

struct StageResult {
  double value = 0.0;
  int max_choice = -1;  // PureMaximin: achieving row, lowest index on ties
  int min_choice = -1;  // PureMaximin: minimizer's reply inside that row
  std::vector<double> row_mixed;  // MixedValue strategies
  std::vector<double> col_mixed;
};

inline StageResult stage_value(const Matrix& table, const StageMode& mode) {
  if (table.empty() || table[0].empty())
    throw std::invalid_argument("stage_value: empty table");
  StageResult r;
  if (const auto* mv = std::get_if<MixedValue>(&mode)) {
    MatrixGameSolution sol = matrix_game_value(table, mv->lp_tol);
    r.value = sol.value;
    r.row_mixed = std::move(sol.row_strategy);
    r.col_mixed = std::move(sol.col_strategy);
    return r;
  }
  for (std::size_t a = 0; a < table.size(); ++a) {
    if (table[a].size() != table[0].size())
      throw std::invalid_argument("stage_value: ragged table");
    std::size_t arg = 0;
    for (std::size_t b = 1; b < table[a].size(); ++b)
      if (table[a][b] < table[a][arg]) arg = b;
    if (a == 0 || table[a][arg] > r.value) {
      r.value = table[a][arg];
      r.max_choice = static_cast<int>(a);
      r.min_choice = static_cast<int>(arg);
    }
  }
  return r;
}

namespace detail {

// One-step expected continuation over the successor distribution.
inline double expectation(const std::vector<double>& dist, const std::vector<double>& f) {
  double e = 0.0;
  for (std::size_t t = 0; t < dist.size(); ++t) e += dist[t] * f[t];
  return e;
}

// Per-state stage table: cost_w * g(s,a,b) + cont_w * E[cont | s,a,b].
// Every recursion in this module is an instance of this table.
inline Matrix stage_table(const GameInstance& g, std::size_t s, const std::vector<double>& cont,
                          double cost_w, double cont_w) {
  Matrix tbl(g.max_actions[s].size(), std::vector<double>(g.min_actions[s].size(), 0.0));
  for (std::size_t a = 0; a < tbl.size(); ++a)
    for (std::size_t b = 0; b < tbl[a].size(); ++b)
      tbl[a][b] = cost_w * g.cost(s, a, b) + cont_w * expectation(g.transition[s][a][b], cont);
  return tbl;
}

inline std::vector<double> stage_sweep(const GameInstance& g, const std::vector<double>& cont,
                                       double cost_w, double cont_w, const StageMode& mode,
                                       std::vector<StageResult>* results = nullptr) {
  std::vector<double> out(g.num_states());
  if (results) results->resize(g.num_states());
  for (std::size_t s = 0; s < g.num_states(); ++s) {
    StageResult r = stage_value(stage_table(g, s, cont, cost_w, cont_w), mode);
    out[s] = r.value;
    if (results) (*results)[s] = std::move(r);
  }
  return out;
}

}  // namespace detail

struct StageChoice {
  int max_action = -1;
  int min_action = -1;
};

struct SolveReport {
  long iterations = 0;
  double residual = 0.0;                // final a-posteriori error bound
  std::vector<StageChoice> choices;     // PureMaximin only, per state
};

// ---------------------------------------------------------------------------
// Finite-horizon family V[\bar v_1] .. V[\bar v_{n_max}], by the one-step
// recursion on totals S_n = n * V_n, which sidesteps n renormalization
// roundings:  S_{n+1}(s) = stage over (a,b) of [ g + E S_n ].
inline std::vector<ValueFunction> finite_horizon_values(const GameInstance& g, long n_max,
                                                        const StageMode& mode,
                                                        SolveReport* report = nullptr) {
  if (n_max < 1) throw std::invalid_argument("finite_horizon_values: n_max must be >= 1");
  const double lo = g.cost_lo(), hi = g.cost_hi();
  std::vector<double> totals(g.num_states(), 0.0);
  std::vector<ValueFunction> out;
  out.reserve(static_cast<std::size_t>(n_max));
  std::vector<StageResult> stage_results;
  for (long n = 1; n <= n_max; ++n) {
    totals = detail::stage_sweep(g, totals, 1.0, 1.0, mode,
                                 report ? &stage_results : nullptr);
    std::vector<double> avg(totals);
    for (double& v : avg) v /= static_cast<double>(n);
    out.push_back(make_value_function(std::move(avg), lo, hi));
  }
  if (report) {
    report->iterations = n_max;
    report->residual = 0.0;
    report->choices.clear();
    for (const auto& r : stage_results)
      report->choices.push_back({r.max_choice, r.min_choice});
  }
  return out;
}

// Value of the horizon-T time average on the piecewise-constant embedding,
// T = m + theta with theta in (0,1]: seed with the theta-weighted partial
// step, then m full backward steps, finally divide by T. Coincides with the
// integer recursion at whole T.
inline ValueFunction fractional_horizon_value(const GameInstance& g, double T,
                                              const StageMode& mode) {
  if (!(T > 0.0)) throw std::invalid_argument("fractional_horizon_value: T must be positive");
  const long m = static_cast<long>(std::ceil(T)) - 1;
  const double theta = T - static_cast<double>(m);
  std::vector<double> u(g.num_states(), 0.0);
  u = detail::stage_sweep(g, u, theta, 0.0, mode);
  for (long i = 0; i < m; ++i) u = detail::stage_sweep(g, u, 1.0, 1.0, mode);
  for (double& v : u) v /= T;
  return make_value_function(std::move(u), g.cost_lo(), g.cost_hi());
}

// ---------------------------------------------------------------------------
// Discounted value: fixed point of  f = stage(mu * g + (1-mu) * E f),
// iterated from f == 0 with the contraction-scaled stopping rule
// ||f_{k+1}-f_k|| * (1-mu)/mu <= tol, so the result is within tol of the
// fixed point.
inline ValueFunction discounted_values(const GameInstance& g, double mu, double tol,
                                       const StageMode& mode, SolveReport* report = nullptr,
                                       long max_iterations = 100000000) {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("discounted_values: mu must lie in (0,1)");
  if (!(tol > 0.0)) throw std::invalid_argument("discounted_values: tol must be positive");
  const double factor = (1.0 - mu) / mu;
  std::vector<double> f(g.num_states(), 0.0);
  std::vector<StageResult> stage_results;
  long it = 0;
  double bound = 0.0;
  for (;;) {
    std::vector<double> next =
        detail::stage_sweep(g, f, mu, 1.0 - mu, mode, report ? &stage_results : nullptr);
    double delta = 0.0;
    for (std::size_t s = 0; s < f.size(); ++s) delta = std::max(delta, std::fabs(next[s] - f[s]));
    f = std::move(next);
    ++it;
    bound = delta * factor;
    if (bound <= tol || delta == 0.0) break;
    if (it >= max_iterations)
      throw std::runtime_error("discounted_values: no convergence within " +
                               std::to_string(max_iterations) + " iterations");
  }
  if (report) {
    report->iterations = it;
    report->residual = bound;
    report->choices.clear();
    for (const auto& r : stage_results)
      report->choices.push_back({r.max_choice, r.min_choice});
  }
  return make_value_function(std::move(f), g.cost_lo(), g.cost_hi(), tol);
}

inline ValueFunction continuous_discounted_value(const GameInstance& g, double lambda, double tol,
                                                 const StageMode& mode,
                                                 SolveReport* report = nullptr) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("continuous_discounted_value: lambda must be positive");
  return discounted_values(g, discount_to_prob(lambda), tol, mode, report);
}

// ---------------------------------------------------------------------------
// h-step propagation of a candidate value function through the horizon
// recursion: the value of the composite payoff that plays h steps and then
// pays U at the reached state, weighted (1/(T+h), T/(T+h)). Computed on
// totals, so propagating the solver's own V[\bar v_T] reproduces
// V[\bar v_{T+h}] identically.
inline ValueFunction propagate_zeta(const GameInstance& g, const ValueFunction& U, long h,
                                    double T, const StageMode& mode) {
  if (h < 1) throw std::invalid_argument("propagate_zeta: h must be >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("propagate_zeta: T must be positive");
  if (U.values.size() != g.num_states())
    throw std::invalid_argument("propagate_zeta: tail domain mismatch");
  std::vector<double> y(U.values);
  for (double& v : y) v *= T;
  for (long i = 0; i < h; ++i) y = detail::stage_sweep(g, y, 1.0, 1.0, mode);
  const double denom = T + static_cast<double>(h);
  for (double& v : y) v /= denom;
  return make_value_function(std::move(y), std::min(g.cost_lo(), U.lo),
                             std::max(g.cost_hi(), U.hi));
}

// Discount analog: h applications of the mu-discounted stage operator.
inline ValueFunction propagate_xi(const GameInstance& g, const ValueFunction& U, long h,
                                  double mu, const StageMode& mode) {
  if (h < 1) throw std::invalid_argument("propagate_xi: h must be >= 1");
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("propagate_xi: mu must lie in (0,1)");
  if (U.values.size() != g.num_states())
    throw std::invalid_argument("propagate_xi: tail domain mismatch");
  std::vector<double> x(U.values);
  for (long i = 0; i < h; ++i) x = detail::stage_sweep(g, x, mu, 1.0 - mu, mode);
  return make_value_function(std::move(x), std::min(g.cost_lo(), U.lo),
                             std::max(g.cost_hi(), U.hi));
}

// ---------------------------------------------------------------------------
// Brute-force oracle for the sup-inf value: enumerate every nonstationary
// Markov maximizer policy, give the minimizer an exact best response by
// backward induction (the minimizer sees the maximizer's current action),
// take the per-state max. Exists to check the DP recursion against the
// sup-inf definition; PureMaximin semantics.

struct BruteForceCaps {
  std::uint64_t max_policies = 1u << 20;
};

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::string msg, double required)
      : std::runtime_error(std::move(msg)), required_(required) {}
  double required() const { return required_; }

 private:
  double required_;
};

inline ValueFunction brute_force_value(const GameInstance& g, long n,
                                       const BruteForceCaps& caps = {}) {
  if (n < 1) throw std::invalid_argument("brute_force_value: n must be >= 1");
  const std::size_t S = g.num_states();

  double policy_count = 1.0;
  for (long t = 0; t < n; ++t)
    for (std::size_t s = 0; s < S; ++s) policy_count *= static_cast<double>(g.max_actions[s].size());
  if (policy_count > static_cast<double>(caps.max_policies))
    throw CapExceeded("brute_force_value: enumeration needs " + diag_num(policy_count) +
                          " policies, cap is " + std::to_string(caps.max_policies),
                      policy_count);

  // policy[t*S + s] = maximizer action; mixed-radix enumeration
  std::vector<std::size_t> policy(static_cast<std::size_t>(n) * S, 0);
  std::vector<double> best(S, -std::numeric_limits<double>::infinity());
  for (;;) {
    // minimizer best response by backward induction
    std::vector<double> j_next(S, 0.0);
    std::vector<double> j(S, 0.0);
    for (long t = n - 1; t >= 0; --t) {
      for (std::size_t s = 0; s < S; ++s) {
        const std::size_t a = policy[static_cast<std::size_t>(t) * S + s];
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < g.min_actions[s].size(); ++b) {
          const double v =
              g.cost(s, a, b) + detail::expectation(g.transition[s][a][b], j_next);
          m = std::min(m, v);
        }
        j[s] = m;
      }
      std::swap(j, j_next);
    }
    for (std::size_t s = 0; s < S; ++s) best[s] = std::max(best[s], j_next[s]);

    // advance the policy counter
    std::size_t pos = 0;
    for (; pos < policy.size(); ++pos) {
      const std::size_t radix = g.max_actions[pos % S].size();
      if (++policy[pos] < radix) break;
      policy[pos] = 0;
    }
    if (pos == policy.size()) break;
  }
  for (double& v : best) v /= static_cast<double>(n);
  return make_value_function(std::move(best), g.cost_lo(), g.cost_hi());
}

}  // namespace tauberlab
