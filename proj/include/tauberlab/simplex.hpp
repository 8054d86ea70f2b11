#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tauberlab/game.hpp"

namespace tauberlab {

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;  // maximizer
  std::vector<double> col_strategy;  // minimizer
  double duality_gap = 0.0;          // col guarantee - row guarantee, on the input matrix
  int pivots = 0;
};

// Mixed value of the zero-sum matrix game "row player maximizes payoff[i][j]".
//
// Reduction: shift entries to >= 1, then solve
//     max 1'w  s.t. M'w <= 1, w >= 0
// (scaled column strategy; the origin is feasible, so a single simplex phase
// suffices). Dense tableau with Bland's entering/leaving rule, which cannot
// cycle; desk-scale tables are at most 16x16 so speed is irrelevant. Row
// strategy comes from the duals under the slack columns. The returned
// duality gap is recomputed from the two strategies on the original matrix,
// independent of the tableau arithmetic, and must not exceed lp_tol.
inline MatrixGameSolution matrix_game_value(const Matrix& payoff, double lp_tol = 1e-9) {
  if (!(lp_tol > 0.0)) throw std::invalid_argument("matrix_game_value: lp_tol must be positive");
  const std::size_t m = payoff.size();
  if (m == 0) throw std::invalid_argument("matrix_game_value: empty table");
  const std::size_t n = payoff[0].size();
  if (n == 0) throw std::invalid_argument("matrix_game_value: empty table");
  for (const auto& row : payoff)
    if (row.size() != n) throw std::invalid_argument("matrix_game_value: ragged table");

  double lo = payoff[0][0], hi = payoff[0][0];
  for (const auto& row : payoff)
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double shift = 1.0 - lo;
  const double scale = std::max(1.0, hi + shift);
  const double eps = 1e-11 * scale;

  // Tableau: m constraint rows over columns [w_0..w_{n-1} | s_0..s_{m-1} | rhs],
  // objective row holds the negated reduced costs, rhs cell the objective.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<double>> tab(m + 1, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = payoff[i][j] + shift;
    tab[i][n + i] = 1.0;
    tab[i][cols - 1] = 1.0;
  }
  for (std::size_t j = 0; j < n; ++j) tab[m][j] = -1.0;  // maximize sum of w

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  const int pivot_cap = 10000;
  int pivots = 0;
  for (;;) {
    // Bland: entering = lowest-index column with negative objective entry
    std::size_t enter = cols - 1;
    for (std::size_t j = 0; j + 1 < cols; ++j)
      if (tab[m][j] < -eps) {
        enter = j;
        break;
      }
    if (enter == cols - 1) break;  // optimal

    // ratio test; ties by lowest basis variable index (Bland)
    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab[i][enter] <= eps) continue;
      const double ratio = tab[i][cols - 1] / tab[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) throw LpError("matrix game LP unbounded; table entries not shifted positive?");

    // pivot
    const double piv = tab[leave][enter];
    for (std::size_t j = 0; j < cols; ++j) tab[leave][j] /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = tab[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) tab[i][j] -= f * tab[leave][j];
    }
    basis[leave] = enter;
    if (++pivots > pivot_cap)
      throw LpError("matrix game LP exceeded pivot cap (" + std::to_string(pivot_cap) + ")");
  }

  const double objective = tab[m][cols - 1];
  if (!(objective > 0.0)) throw LpError("matrix game LP returned a non-positive objective");

  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) w[basis[i]] = tab[i][cols - 1];
  std::vector<double> u(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) u[i] = std::max(0.0, tab[m][n + i]);

  MatrixGameSolution sol;
  sol.pivots = pivots;
  sol.value = 1.0 / objective - shift;

  auto normalized = [](std::vector<double> v) {
    double sum = 0.0;
    for (double& x : v) {
      x = std::max(0.0, x);
      sum += x;
    }
    if (!(sum > 0.0)) throw LpError("matrix game LP produced a degenerate strategy");
    for (double& x : v) x /= sum;
    return v;
  };
  sol.col_strategy = normalized(std::move(w));
  sol.row_strategy = normalized(std::move(u));

  // certificate on the original matrix
  double row_guarantee = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < m; ++i) v += sol.row_strategy[i] * payoff[i][j];
    row_guarantee = std::min(row_guarantee, v);
  }
  double col_guarantee = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += payoff[i][j] * sol.col_strategy[j];
    col_guarantee = std::max(col_guarantee, v);
  }
  sol.duality_gap = col_guarantee - row_guarantee;
  if (!(sol.duality_gap <= lp_tol))
    throw LpError("matrix game LP duality gap " + diag_num(sol.duality_gap) +
                  " exceeds tolerance " + diag_num(lp_tol));
  return sol;
}

}  // namespace tauberlab
