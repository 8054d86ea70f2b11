#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

#include "tauberlab/game.hpp"
#include "tauberlab/lasso.hpp"

namespace tauberlab {

// Compensated (Kahan) accumulator. Long stage-cost sums go through this so
// the 1e-12 tolerances used throughout stay honest at n ~ 1e5.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double total() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Discount-rate <-> stopping-probability conversion, mu*(lambda) = 1 - e^{-lambda}.
// On piecewise-constant processes this identifies the continuous Abel mean
// with its discrete counterpart.
inline double discount_to_prob(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("discount_to_prob: lambda must be positive");
  return -std::expm1(-lambda);
}

inline double prob_to_discount(double mu) {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("prob_to_discount: mu must lie in (0,1)");
  return -std::log1p(-mu);
}

// ---------------------------------------------------------------------------
// Payoff specifications

struct Cesaro {           // time average over [0, T]
  double horizon;
};
struct Abel {             // exponentially discounted average, rate lambda
  double rate;
};
struct DiscreteCesaro {   // average of the first n stage costs
  long steps;
};
struct DiscreteAbel {     // stopping-probability discounted sum
  double stop_prob;
};
struct Zeta {             // play h steps, then pay the tail value, horizon flavor
  ValueFunction tail;
  long steps;
  double horizon;
};
struct Xi {               // play h steps, then pay the tail value, discount flavor
  ValueFunction tail;
  long steps;
  double rate;
};

using PayoffSpec = std::variant<Cesaro, Abel, DiscreteCesaro, DiscreteAbel, Zeta, Xi>;

inline std::string payoff_kind(const PayoffSpec& p) {
  struct V {
    std::string operator()(const Cesaro&) const { return "cesaro"; }
    std::string operator()(const Abel&) const { return "abel"; }
    std::string operator()(const DiscreteCesaro&) const { return "discrete-cesaro"; }
    std::string operator()(const DiscreteAbel&) const { return "discrete-abel"; }
    std::string operator()(const Zeta&) const { return "zeta"; }
    std::string operator()(const Xi&) const { return "xi"; }
  };
  return std::visit(V{}, p);
}

// ---------------------------------------------------------------------------
// Evaluation on lassos. All evaluators below take the per-state cost vector;
// the GameInstance overloads forward to it. Payoffs on bare processes are
// state-cost only by definition, so action-cost games are rejected here.

namespace detail {
inline const std::vector<double>& payoff_cost(const GameInstance& g) {
  if (g.action_cost)
    throw std::invalid_argument("payoff evaluation on processes requires a state-only cost");
  return g.state_cost;
}
inline double cost_at(const std::vector<double>& cost, int s) {
  if (s < 0 || static_cast<std::size_t>(s) >= cost.size())
    throw std::out_of_range("process visits a state outside the cost domain");
  return cost[static_cast<std::size_t>(s)];
}
}  // namespace detail

// (1/T) * integral of the piecewise-constant cost over [0, T]: full steps
// plus a (T - floor(T))-weighted partial step.
inline double cesaro_value(const std::vector<double>& cost, const LassoProcess& z, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("cesaro_value: horizon must be positive");
  const double whole = std::floor(T);
  const auto m = static_cast<std::size_t>(whole);
  KahanSum acc;
  for (std::size_t t = 0; t < m; ++t) acc.add(detail::cost_at(cost, state_at_step(z, t)));
  const double frac = T - whole;
  if (frac > 0.0) acc.add(frac * detail::cost_at(cost, state_at_step(z, m)));
  return acc.total() / T;
}

inline double discrete_cesaro(const std::vector<double>& cost, const LassoProcess& z, long n) {
  if (n < 1) throw std::invalid_argument("discrete_cesaro: n must be >= 1");
  KahanSum acc;
  for (long t = 0; t < n; ++t)
    acc.add(detail::cost_at(cost, state_at_step(z, static_cast<std::size_t>(t))));
  return acc.total() / static_cast<double>(n);
}

// mu * sum_t (1-mu)^t g(z(t)), exactly on the lasso: finite prefix sum plus
// the geometric cycle sum with factor 1/(1-(1-mu)^L). No truncation error.
inline double discrete_abel(const std::vector<double>& cost, const LassoProcess& z, double mu) {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("discrete_abel: mu must lie in (0,1)");
  if (z.cycle.empty()) throw std::invalid_argument("lasso cycle is empty");
  const double q = 1.0 - mu;
  KahanSum prefix;
  double w = 1.0;
  for (int s : z.prefix) {
    prefix.add(w * detail::cost_at(cost, s));
    w *= q;
  }
  // w == q^{|prefix|}
  KahanSum cyc;
  double wc = 1.0;
  for (int s : z.cycle) {
    cyc.add(wc * detail::cost_at(cost, s));
    wc *= q;
  }
  const double cycle_len = static_cast<double>(z.cycle.size());
  const double denom = -std::expm1(cycle_len * std::log1p(-mu));  // 1 - q^L, cancellation-safe
  return mu * (prefix.total() + w * cyc.total() / denom);
}

// lambda * integral of e^{-lambda t} g(z(t)) over [0, inf). On the
// piecewise-constant embedding this is the discrete sum at mu*(lambda).
inline double abel_value(const std::vector<double>& cost, const LassoProcess& z, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("abel_value: lambda must be positive");
  return discrete_abel(cost, z, discount_to_prob(lambda));
}

inline double composite_value(const std::vector<double>& cost, const LassoProcess& z,
                              const Zeta& p) {
  if (p.steps < 1) throw std::invalid_argument("zeta: h must be >= 1");
  if (!(p.horizon > 0.0)) throw std::invalid_argument("zeta: T must be positive");
  KahanSum acc;
  for (long t = 0; t < p.steps; ++t)
    acc.add(detail::cost_at(cost, state_at_step(z, static_cast<std::size_t>(t))));
  const int reached = state_at_step(z, static_cast<std::size_t>(p.steps));
  if (reached < 0 || static_cast<std::size_t>(reached) >= p.tail.values.size())
    throw std::out_of_range("zeta: tail value function does not cover the reached state");
  const double denom = p.horizon + static_cast<double>(p.steps);
  return acc.total() / denom +
         (p.horizon / denom) * p.tail.values[static_cast<std::size_t>(reached)];
}

inline double composite_value(const std::vector<double>& cost, const LassoProcess& z,
                              const Xi& p) {
  if (p.steps < 1) throw std::invalid_argument("xi: h must be >= 1");
  const double mu = discount_to_prob(p.rate);
  const double q = 1.0 - mu;
  KahanSum acc;
  double w = 1.0;
  for (long t = 0; t < p.steps; ++t) {
    acc.add(w * detail::cost_at(cost, state_at_step(z, static_cast<std::size_t>(t))));
    w *= q;
  }
  const int reached = state_at_step(z, static_cast<std::size_t>(p.steps));
  if (reached < 0 || static_cast<std::size_t>(reached) >= p.tail.values.size())
    throw std::out_of_range("xi: tail value function does not cover the reached state");
  const double qh = std::exp(-p.rate * static_cast<double>(p.steps));  // (1-mu)^h
  return mu * acc.total() + qh * p.tail.values[static_cast<std::size_t>(reached)];
}

inline double evaluate_payoff(const std::vector<double>& cost, const LassoProcess& z,
                              const PayoffSpec& p) {
  struct V {
    const std::vector<double>& cost;
    const LassoProcess& z;
    double operator()(const Cesaro& s) const { return cesaro_value(cost, z, s.horizon); }
    double operator()(const Abel& s) const { return abel_value(cost, z, s.rate); }
    double operator()(const DiscreteCesaro& s) const { return discrete_cesaro(cost, z, s.steps); }
    double operator()(const DiscreteAbel& s) const { return discrete_abel(cost, z, s.stop_prob); }
    double operator()(const Zeta& s) const { return composite_value(cost, z, s); }
    double operator()(const Xi& s) const { return composite_value(cost, z, s); }
  };
  return std::visit(V{cost, z}, p);
}

// GameInstance conveniences
inline double cesaro_value(const GameInstance& g, const LassoProcess& z, double T) {
  return cesaro_value(detail::payoff_cost(g), z, T);
}
inline double abel_value(const GameInstance& g, const LassoProcess& z, double lambda) {
  return abel_value(detail::payoff_cost(g), z, lambda);
}
inline double discrete_cesaro(const GameInstance& g, const LassoProcess& z, long n) {
  return discrete_cesaro(detail::payoff_cost(g), z, n);
}
inline double discrete_abel(const GameInstance& g, const LassoProcess& z, double mu) {
  return discrete_abel(detail::payoff_cost(g), z, mu);
}
inline double evaluate_payoff(const GameInstance& g, const LassoProcess& z, const PayoffSpec& p) {
  return evaluate_payoff(detail::payoff_cost(g), z, p);
}

}  // namespace tauberlab
