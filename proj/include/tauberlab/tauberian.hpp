#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tauberlab/game.hpp"
#include "tauberlab/payoffs.hpp"
#include "tauberlab/solver.hpp"

namespace tauberlab {

// How a scan pairs the discount with the horizon: either through the
// rate conversion mu*(1/n) = 1 - e^{-1/n}, or raw mu = 1/n, which is how
// the one-sided asymptotic inequalities pair the two families.
enum class Pairing { exp_conversion, inverse };

inline std::string pairing_id(Pairing p) {
  return p == Pairing::exp_conversion ? "exp" : "inverse";
}

inline double paired_mu(Pairing p, long n) {
  if (n < 1) throw std::invalid_argument("pairing: n must be >= 1");
  if (p == Pairing::exp_conversion) return discount_to_prob(1.0 / static_cast<double>(n));
  if (n < 2)
    throw std::invalid_argument("pairing 1/n requires n >= 2 so that mu stays inside (0,1)");
  return 1.0 / static_cast<double>(n);
}

struct ScanRecord {
  long n = 0;
  double mu = 0.0;
  std::vector<double> horizon_values;    // per state
  std::vector<double> discounted_values; // per state
  double gap_h_minus_d = 0.0;            // max over states of (V - W)
  double gap_d_minus_h = 0.0;            // max over states of (W - V)
  double gap_sup = 0.0;                  // sup norm = max of the two
};

// Per-parameter table of both value families and their gaps. The sup is
// exact over the finite state set; that finite sup stands in for the
// uniform norm over an abstract state space, and every serialized header
// says so (see report.hpp).
struct ScanReport {
  std::string game_name;
  std::string mode;
  std::string pairing;
  std::vector<std::string> states;
  std::vector<ScanRecord> records;
};

inline ScanReport gap_scan(const GameInstance& g, const std::vector<long>& n_list,
                           const StageMode& mode, Pairing pairing,
                           double fixed_point_tol = 1e-10) {
  if (n_list.empty()) throw std::invalid_argument("gap_scan: empty n list");
  for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
    if (n_list[i] >= n_list[i + 1])
      throw std::invalid_argument("gap_scan: n list must be strictly increasing");
  if (n_list.front() < 1) throw std::invalid_argument("gap_scan: n must be >= 1");

  ScanReport rep;
  rep.game_name = g.name;
  rep.mode = mode_id(mode);
  rep.pairing = pairing_id(pairing);
  rep.states = g.states;

  const auto horizon_family = finite_horizon_values(g, n_list.back(), mode);
  for (long n : n_list) {
    ScanRecord rec;
    rec.n = n;
    rec.mu = paired_mu(pairing, n);
    rec.horizon_values = horizon_family[static_cast<std::size_t>(n - 1)].values;
    rec.discounted_values = discounted_values(g, rec.mu, fixed_point_tol, mode).values;
    rec.gap_h_minus_d = -std::numeric_limits<double>::infinity();
    rec.gap_d_minus_h = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < rec.horizon_values.size(); ++s) {
      rec.gap_h_minus_d =
          std::max(rec.gap_h_minus_d, rec.horizon_values[s] - rec.discounted_values[s]);
      rec.gap_d_minus_h =
          std::max(rec.gap_d_minus_h, rec.discounted_values[s] - rec.horizon_values[s]);
    }
    rec.gap_sup = std::max(rec.gap_h_minus_d, rec.gap_d_minus_h);
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Quantitative estimates. Each check returns its margin (bound minus
// observed gap); non-negative means the estimate holds.

// |V[v_T] - V[v_rT]| <= 2(r-1), uniformly over states.
inline double check_horizon_estimate(const GameInstance& g, double T, double r,
                                     const StageMode& mode) {
  if (!(T > 0.0)) throw std::invalid_argument("check_horizon_estimate: T must be positive");
  if (!(r > 1.0)) throw std::invalid_argument("check_horizon_estimate: r must exceed 1");
  const ValueFunction a = fractional_horizon_value(g, T, mode);
  const ValueFunction b = fractional_horizon_value(g, r * T, mode);
  return 2.0 * (r - 1.0) - sup_distance(a, b);
}

// |V[w_lambda] - V[w_r*lambda]| <= 2(r-1); the margin may dip to -2*tol
// from the two fixed-point approximations.
inline double check_discount_estimate(const GameInstance& g, double lambda, double r, double tol,
                                      const StageMode& mode) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("check_discount_estimate: lambda must be positive");
  if (!(r > 1.0)) throw std::invalid_argument("check_discount_estimate: r must exceed 1");
  const ValueFunction a = continuous_discounted_value(g, lambda, tol, mode);
  const ValueFunction b = continuous_discounted_value(g, r * lambda, tol, mode);
  return 2.0 * (r - 1.0) - sup_distance(a, b);
}

// ||V[\bar v_{ceil(T)}] - V[v_T]|| <= 2(ceil(T)-T)/T, the discretization
// step in the discrete-to-continuous transfer.
inline double check_discretization_bound(const GameInstance& g, double T, const StageMode& mode) {
  if (!(T > 0.0)) throw std::invalid_argument("check_discretization_bound: T must be positive");
  const long n = static_cast<long>(std::ceil(T));
  const ValueFunction integer_value = finite_horizon_values(g, n, mode).back();
  const ValueFunction fractional = fractional_horizon_value(g, T, mode);
  const double bound = 2.0 * (static_cast<double>(n) - T) / T;
  return bound - sup_distance(integer_value, fractional);
}

// ---------------------------------------------------------------------------
// Sub/supersolution checks for candidate families, in both indexings.

enum class FamilyKind { horizon, discount };

struct SolutionFamily {
  FamilyKind kind = FamilyKind::horizon;
  std::vector<double> index;          // horizon n (integral) or stop-probability mu
  std::vector<ValueFunction> values;  // one per index
};

namespace detail {
inline const ValueFunction* family_at(const SolutionFamily& f, double idx) {
  for (std::size_t i = 0; i < f.index.size(); ++i)
    if (f.index[i] == idx) return &f.values[i];
  return nullptr;
}
}  // namespace detail

// Max signed violation of the subsolution inequality over the tested pairs:
//   horizon:  U_{T+h}(s) - V[zeta^{U_T}_{h,T}](s) - eps
//   discount: U_mu(s)    - V[xi^{U_mu}_{h,mu}](s) - eps
// where the composite value is h-step DP propagation. `super` flips the
// inequality. A result <= 0 means the family passes.
inline double check_subsolution(const GameInstance& g, const SolutionFamily& family,
                                const std::vector<long>& h_set, double eps, bool super,
                                const StageMode& mode) {
  if (family.index.empty()) throw std::invalid_argument("check_subsolution: empty family");
  if (h_set.empty()) throw std::invalid_argument("check_subsolution: empty h set");
  double worst = -std::numeric_limits<double>::infinity();
  bool tested = false;
  for (std::size_t i = 0; i < family.index.size(); ++i) {
    for (long h : h_set) {
      if (h < 1) throw std::invalid_argument("check_subsolution: h must be >= 1");
      ValueFunction propagated;
      const ValueFunction* target = nullptr;
      if (family.kind == FamilyKind::horizon) {
        const double T = family.index[i];
        target = detail::family_at(family, T + static_cast<double>(h));
        if (!target) continue;  // family does not cover T + h
        propagated = propagate_zeta(g, family.values[i], h, T, mode);
      } else {
        const double mu = family.index[i];
        target = &family.values[i];
        propagated = propagate_xi(g, family.values[i], h, mu, mode);
      }
      tested = true;
      for (std::size_t s = 0; s < propagated.values.size(); ++s) {
        const double v = super ? propagated.values[s] - eps - target->values[s]
                               : target->values[s] - propagated.values[s] - eps;
        worst = std::max(worst, v);
      }
    }
  }
  if (!tested)
    throw std::invalid_argument("check_subsolution: family misses every tested index pair");
  return worst;
}

// ---------------------------------------------------------------------------
// Slowly-varying diagnostics: sampled versions of the kappa suprema over a
// geometric p-grid. Finite data cannot certify a limsup, so every number
// reported here is a lower bound on the true kappa, never an assertion.

struct IndexedFamily {
  std::vector<double> index;          // ascending
  std::vector<ValueFunction> values;
};

struct KappaSample {
  double p = 1.0;
  double target_index = 0.0;  // the exact scaled index requested
  double used_index = 0.0;    // nearest available family index
  double diff = 0.0;          // sup over states of the value difference
};

struct KappaResult {
  double kappa = 0.0;
  std::vector<KappaSample> samples;
};

namespace detail {
inline std::size_t nearest_index(const IndexedFamily& f, double target) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < f.index.size(); ++i)
    if (std::fabs(f.index[i] - target) < std::fabs(f.index[best] - target)) best = i;
  return best;
}

// kappa sampled over p in a geometric [1, p0] grid; scaled_index(p) names
// the family member compared against the anchor.
template <typename ScaledIndex>
KappaResult sampled_kappa(const IndexedFamily& f, double anchor, double p0, int grid_size,
                          ScaledIndex scaled_index, bool anchor_first) {
  if (f.index.empty()) throw std::invalid_argument("kappa: empty family");
  if (!(p0 > 1.0)) throw std::invalid_argument("kappa: p0 must exceed 1");
  if (grid_size < 2) throw std::invalid_argument("kappa: grid must have at least 2 points");
  const ValueFunction& base = f.values[nearest_index(f, anchor)];
  KappaResult out;
  out.kappa = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_size; ++i) {
    const double p = std::pow(p0, static_cast<double>(i) / static_cast<double>(grid_size - 1));
    KappaSample s;
    s.p = p;
    s.target_index = scaled_index(p);
    const std::size_t k = nearest_index(f, s.target_index);
    s.used_index = f.index[k];
    s.diff = anchor_first ? sup_signed_excess(base, f.values[k])
                          : sup_signed_excess(f.values[k], base);
    out.kappa = std::max(out.kappa, s.diff);
    out.samples.push_back(s);
  }
  return out;
}
}  // namespace detail

// kappa(T, p0) = sup_{p in [1,p0]} sup_s (U_{T/p}(s) - U_T(s)), sampled.
inline KappaResult kappa_horizon(const IndexedFamily& f, double T, double p0,
                                 int grid_size = 32) {
  return detail::sampled_kappa(
      f, T, p0, grid_size, [T](double p) { return T / p; }, false);
}

// kappa(lambda, p0) = sup_{p in [1,p0]} sup_s (U_lambda(s) - U_{p lambda}(s)), sampled.
inline KappaResult kappa_discount(const IndexedFamily& f, double lambda, double p0,
                                  int grid_size = 32) {
  return detail::sampled_kappa(
      f, lambda, p0, grid_size, [lambda](double p) { return p * lambda; }, true);
}

struct KappaTable {
  FamilyKind kind = FamilyKind::horizon;
  std::vector<double> anchors;   // T or lambda values
  std::vector<double> p0_grid;   // ascending
  std::vector<std::vector<double>> kappa;  // [anchor][p0]
  std::string sampling_note;
};

// Tables accumulate the sampled sup over nested p-ranges, so each row is
// non-decreasing in p0 by construction, matching the definition of kappa
// as a sup over a growing set.
inline KappaTable kappa_table(const IndexedFamily& f, FamilyKind kind,
                              const std::vector<double>& anchors,
                              const std::vector<double>& p0_grid, int grid_size = 32) {
  if (anchors.empty() || p0_grid.empty())
    throw std::invalid_argument("kappa_table: empty grid");
  for (std::size_t i = 0; i + 1 < p0_grid.size(); ++i)
    if (p0_grid[i] >= p0_grid[i + 1])
      throw std::invalid_argument("kappa_table: p0 grid must be strictly increasing");
  KappaTable tbl;
  tbl.kind = kind;
  tbl.anchors = anchors;
  tbl.p0_grid = p0_grid;
  tbl.sampling_note = "geometric p-grid, " + std::to_string(grid_size) +
                      " points per p0, cumulative sup over nested ranges; values are lower "
                      "bounds on the true kappa";
  for (double anchor : anchors) {
    std::vector<double> row;
    double running = -std::numeric_limits<double>::infinity();
    for (double p0 : p0_grid) {
      const KappaResult k = kind == FamilyKind::horizon
                                ? kappa_horizon(f, anchor, p0, grid_size)
                                : kappa_discount(f, anchor, p0, grid_size);
      running = std::max(running, k.kappa);
      row.push_back(running);
    }
    tbl.kappa.push_back(std::move(row));
  }
  return tbl;
}

}  // namespace tauberlab
