#pragma once

#include <charconv>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "tauberlab/game.hpp"
#include "tauberlab/solver.hpp"
#include "tauberlab/tauberian.hpp"

namespace tauberlab {

// Shortest decimal form that round-trips to the same double. This is the
// one numeric format every emitted CSV uses: full precision and byte
// determinism at once.
inline std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

// Fixed-width rendering of a CSV-shaped grid for the human-readable format.
inline std::string aligned_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.resize(c + 1, 0);
      width[c] = std::max(width[c], row[c].size());
    }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      out += row[c];
      out.append(width[c] - row[c].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Value functions: "state,value" rows.

inline std::vector<std::vector<std::string>> value_function_cells(const GameInstance& g,
                                                                  const ValueFunction& f) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"state", "value"});
  for (std::size_t s = 0; s < g.num_states(); ++s)
    rows.push_back({g.states[s], format_double(f.values[s])});
  return rows;
}

inline std::string value_function_csv(const GameInstance& g, const ValueFunction& f) {
  std::string out;
  for (const auto& row : value_function_cells(g, f)) out += csv_line(row);
  return out;
}

inline std::string value_function_table(const GameInstance& g, const ValueFunction& f) {
  return aligned_table(value_function_cells(g, f));
}

// ---------------------------------------------------------------------------
// Scan reports. Column order: index, parameter, state-wise values, gaps.
// The leading comment row records that the reported sup is the exact sup
// over the finite state set, the finite stand-in for a uniform norm.

inline std::vector<std::vector<std::string>> scan_report_cells(const ScanReport& rep) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"n", "mu"};
  for (const auto& s : rep.states) header.push_back("v[" + s + "]");
  for (const auto& s : rep.states) header.push_back("w[" + s + "]");
  header.push_back("gap_v_minus_w");
  header.push_back("gap_w_minus_v");
  header.push_back("gap_sup");
  rows.push_back(std::move(header));
  for (const auto& r : rep.records) {
    std::vector<std::string> row{std::to_string(r.n), format_double(r.mu)};
    for (double v : r.horizon_values) row.push_back(format_double(v));
    for (double w : r.discounted_values) row.push_back(format_double(w));
    row.push_back(format_double(r.gap_h_minus_d));
    row.push_back(format_double(r.gap_d_minus_h));
    row.push_back(format_double(r.gap_sup));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string scan_report_header(const ScanReport& rep) {
  return "# gap scan: game=" + rep.game_name + " mode=" + rep.mode + " pairing=" + rep.pairing +
         "; sup taken exactly over the finite state set\n";
}

inline std::string scan_report_csv(const ScanReport& rep) {
  std::string out = scan_report_header(rep);
  for (const auto& row : scan_report_cells(rep)) out += csv_line(row);
  return out;
}

inline std::string scan_report_table(const ScanReport& rep) {
  return scan_report_header(rep) + aligned_table(scan_report_cells(rep));
}

// ---------------------------------------------------------------------------
// Kappa tables: rows (kind, index, p0, kappa).

inline std::vector<std::vector<std::string>> kappa_table_cells(const KappaTable& t) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"kind", "index", "p0", "kappa"});
  const std::string kind = t.kind == FamilyKind::horizon ? "horizon" : "discount";
  for (std::size_t i = 0; i < t.anchors.size(); ++i)
    for (std::size_t j = 0; j < t.p0_grid.size(); ++j)
      rows.push_back({kind, format_double(t.anchors[i]), format_double(t.p0_grid[j]),
                      format_double(t.kappa[i][j])});
  return rows;
}

inline std::string kappa_table_header(const KappaTable& t) {
  return "# kappa diagnostics: " + t.sampling_note + "\n";
}

inline std::string kappa_table_csv(const KappaTable& t) {
  std::string out = kappa_table_header(t);
  for (const auto& row : kappa_table_cells(t)) out += csv_line(row);
  return out;
}

inline std::string kappa_table_text(const KappaTable& t) {
  return kappa_table_header(t) + aligned_table(kappa_table_cells(t));
}

// ---------------------------------------------------------------------------
// Solve reports.

inline nlohmann::ordered_json solve_report_json(const GameInstance& g, const SolveReport& rep) {
  nlohmann::ordered_json j;
  j["iterations"] = rep.iterations;
  j["residual"] = rep.residual;
  nlohmann::ordered_json choices;
  for (std::size_t s = 0; s < rep.choices.size() && s < g.num_states(); ++s) {
    const auto& c = rep.choices[s];
    if (c.max_action < 0) continue;  // mixed mode carries no pure choices
    choices[g.states[s]] = {
        {"max", g.max_actions[s][static_cast<std::size_t>(c.max_action)]},
        {"min", g.min_actions[s][static_cast<std::size_t>(c.min_action)]}};
  }
  if (!choices.empty()) j["choices"] = std::move(choices);
  return j;
}

}  // namespace tauberlab
