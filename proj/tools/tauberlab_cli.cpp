// Batch front end: game ingestion, value computation, Tauberian gap scans,
// estimate sweeps, the DPP battery and the brute-force oracle comparison.
// Outputs are byte-deterministic for a fixed command line.
//
// Exit codes: 0 ok, 1 config error, 2 game validation error,
//             3 oracle cap exceeded, 4 invariant/tolerance failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tauberlab/tauberlab.hpp"

namespace {

using namespace tauberlab;

// ---------------------------------------------------------------------------
// List parsing: "start:stop:geometric16", "start:stop:linear8", "1,2,4", "7"

std::vector<double> parse_real_list(const std::string& text) {
  const auto c1 = text.find(':');
  if (c1 != std::string::npos) {
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw std::invalid_argument("range syntax is start:stop:gridspec, got '" + text + "'");
    const double start = std::stod(text.substr(0, c1));
    const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const std::string grid = text.substr(c2 + 1);
    std::size_t kind_len = 0;
    bool geometric = false;
    if (grid.rfind("geometric", 0) == 0) {
      geometric = true;
      kind_len = 9;
    } else if (grid.rfind("linear", 0) == 0) {
      kind_len = 6;
    } else {
      throw std::invalid_argument("gridspec must be geometricN or linearN, got '" + grid + "'");
    }
    const long count = std::stol(grid.substr(kind_len));
    if (count < 2) throw std::invalid_argument("grid needs at least 2 points");
    if (geometric && !(start > 0.0 && stop > 0.0))
      throw std::invalid_argument("geometric grids need positive endpoints");
    if (!(stop > start)) throw std::invalid_argument("range needs stop > start");
    std::vector<double> out;
    for (long i = 0; i < count; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(geometric ? start * std::pow(stop / start, f)
                              : start + f * (stop - start));
    }
    return out;
  }
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty()) throw std::invalid_argument("empty element in list '" + text + "'");
    out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<long> parse_horizon_list(const std::string& text) {
  std::vector<long> out;
  for (double x : parse_real_list(text)) {
    const long n = std::lround(x);
    if (n < 1) throw std::invalid_argument("horizon list entries must round to >= 1");
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  for (std::size_t i = 0; i + 1 < out.size(); ++i)
    if (out[i] >= out[i + 1])
      throw std::invalid_argument("horizon list must be strictly increasing");
  return out;
}

// ---------------------------------------------------------------------------

struct CommonOptions {
  std::string game_path;
  std::string random_spec;
  std::uint64_t seed = 0;
  bool stochastic = false;
  std::string mode = "pure";
  double tol = 1e-10;
  double lp_tol = 1e-9;
  std::string out_path;
  std::string format = "csv";
};

void add_game_options(CLI::App* cmd, CommonOptions& opt) {
  auto* game = cmd->add_option("--game", opt.game_path, "game description JSON file");
  auto* random = cmd->add_option("--random", opt.random_spec,
                                 "random instance sizes S,A,B (with --seed)");
  game->excludes(random);
  random->excludes(game);
  cmd->add_option("--seed", opt.seed, "random instance seed");
  cmd->add_flag("--stochastic", opt.stochastic,
                "random transitions get full-support weights instead of point masses");
}

void add_mode_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--mode", opt.mode, "stage operator: pure | mixed")
      ->check(CLI::IsMember({"pure", "mixed"}));
  cmd->add_option("--tol", opt.tol, "fixed-point stopping tolerance");
  cmd->add_option("--lp-tol", opt.lp_tol, "duality gap certificate tolerance");
}

void add_output_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--out", opt.out_path, "output path (default: stdout)");
  cmd->add_option("--format", opt.format, "output format: csv | table")
      ->check(CLI::IsMember({"csv", "table"}));
}

GameInstance load_game(const CommonOptions& opt) {
  if (!opt.game_path.empty()) return load_game_file(opt.game_path);
  if (!opt.random_spec.empty()) {
    const auto sizes = parse_real_list(opt.random_spec);
    if (sizes.size() != 3) throw std::invalid_argument("--random expects S,A,B");
    return random_game(static_cast<std::size_t>(sizes[0]), static_cast<std::size_t>(sizes[1]),
                       static_cast<std::size_t>(sizes[2]), opt.seed, !opt.stochastic);
  }
  throw std::invalid_argument("exactly one input source required: --game FILE or --random S,A,B");
}

StageMode stage_mode(const CommonOptions& opt) {
  if (opt.mode == "mixed") return MixedValue{opt.lp_tol};
  return PureMaximin{};
}

void emit(const CommonOptions& opt, const std::string& payload) {
  if (opt.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path: " + opt.out_path);
  out << payload;
}

std::string rows_to_payload(const std::vector<std::vector<std::string>>& rows,
                            const std::string& format, const std::string& header) {
  std::string payload = header;
  if (format == "table") {
    payload += tauberlab::aligned_table(rows);
  } else {
    for (const auto& row : rows) payload += tauberlab::csv_line(row);
  }
  return payload;
}

// ---------------------------------------------------------------------------
// Subcommand bodies

int run_validate(const CommonOptions& opt) {
  const GameInstance g = load_game(opt);
  std::cout << "ok: name=" << g.name << " states=" << g.num_states() << "\n";
  return 0;
}

int run_solve(const CommonOptions& opt, std::optional<double> horizon,
              std::optional<double> mu, std::optional<double> lambda) {
  if (!!horizon + !!mu + !!lambda != 1)
    throw std::invalid_argument("solve needs exactly one of --horizon, --mu, --lambda");
  const GameInstance g = load_game(opt);
  const StageMode mode = stage_mode(opt);
  ValueFunction value;
  SolveReport report;
  if (horizon) {
    if (!(*horizon > 0.0)) throw std::invalid_argument("--horizon must be positive");
    if (*horizon == std::floor(*horizon)) {
      value = finite_horizon_values(g, static_cast<long>(*horizon), mode, &report).back();
    } else {
      value = fractional_horizon_value(g, *horizon, mode);
      report.iterations = static_cast<long>(std::ceil(*horizon));
    }
  } else if (mu) {
    value = discounted_values(g, *mu, opt.tol, mode, &report);
  } else {
    value = continuous_discounted_value(g, *lambda, opt.tol, mode, &report);
  }
  emit(opt, opt.format == "table" ? value_function_table(g, value)
                                  : value_function_csv(g, value));
  std::cout << solve_report_json(g, report).dump() << "\n";
  return 0;
}

int run_scan(const CommonOptions& opt, const std::string& n_spec, const std::string& pairing_name,
             const std::string& kappa_p0_spec, const std::string& kappa_out) {
  const GameInstance g = load_game(opt);
  const Pairing pairing =
      pairing_name == "inverse" ? Pairing::inverse : Pairing::exp_conversion;
  const std::vector<long> n_list = parse_horizon_list(n_spec);
  const ScanReport rep = gap_scan(g, n_list, stage_mode(opt), pairing, opt.tol);
  emit(opt, opt.format == "table" ? scan_report_table(rep) : scan_report_csv(rep));

  if (!kappa_p0_spec.empty()) {
    std::vector<double> p0_grid = parse_real_list(kappa_p0_spec);
    IndexedFamily horizon_family, discount_family;
    for (const auto& r : rep.records) {
      horizon_family.index.push_back(static_cast<double>(r.n));
      horizon_family.values.push_back(ValueFunction{r.horizon_values, 0.0, 1.0});
      discount_family.index.push_back(prob_to_discount(r.mu));
      discount_family.values.push_back(ValueFunction{r.discounted_values, 0.0, 1.0});
    }
    // discount indices ascend
    std::reverse(discount_family.index.begin(), discount_family.index.end());
    std::reverse(discount_family.values.begin(), discount_family.values.end());
    const KappaTable horizon_tbl =
        kappa_table(horizon_family, FamilyKind::horizon, horizon_family.index, p0_grid);
    const KappaTable discount_tbl =
        kappa_table(discount_family, FamilyKind::discount, discount_family.index, p0_grid);
    std::string payload = kappa_table_header(horizon_tbl);
    auto rows = kappa_table_cells(horizon_tbl);
    const auto more = kappa_table_cells(discount_tbl);
    rows.insert(rows.end(), more.begin() + 1, more.end());  // shared header row
    payload = rows_to_payload(rows, opt.format, payload);
    if (kappa_out.empty()) {
      std::cout << payload;
    } else {
      std::ofstream out(kappa_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open output path: " + kappa_out);
      out << payload;
    }
  }
  return 0;
}

int run_estimates(const CommonOptions& opt, const std::string& t_spec,
                  const std::string& lambda_spec, const std::string& r_spec) {
  const GameInstance g = load_game(opt);
  const StageMode mode = stage_mode(opt);
  const std::vector<double> t_list = t_spec.empty() ? std::vector<double>{} : parse_real_list(t_spec);
  const std::vector<double> lambda_list =
      lambda_spec.empty() ? std::vector<double>{} : parse_real_list(lambda_spec);
  const std::vector<double> r_list = parse_real_list(r_spec);
  for (double r : r_list)
    if (!(r > 1.0)) throw std::invalid_argument("--r entries must exceed 1");
  if (t_list.empty() && lambda_list.empty())
    throw std::invalid_argument("estimates needs --T and/or --lambda");

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"kind", "index", "r", "gap", "bound", "margin"});
  bool failed = false;
  std::string first_failure;
  auto push = [&](const std::string& kind, double index, double r, double bound, double margin) {
    rows.push_back({kind, format_double(index), format_double(r), format_double(bound - margin),
                    format_double(bound), format_double(margin)});
    const double allowance = kind == "discount" ? 2.0 * opt.tol : 0.0;
    if (margin < -allowance && !failed) {
      failed = true;
      first_failure = "estimate margin negative at kind=" + kind + " index=" + format_double(index) +
                      " r=" + format_double(r);
    }
  };
  for (double T : t_list)
    for (double r : r_list)
      push("horizon", T, r, 2.0 * (r - 1.0), check_horizon_estimate(g, T, r, mode));
  for (double lambda : lambda_list)
    for (double r : r_list)
      push("discount", lambda, r, 2.0 * (r - 1.0),
           check_discount_estimate(g, lambda, r, opt.tol, mode));
  for (double T : t_list) {
    const double n = std::ceil(T);
    const double r_eff = n / T;
    push("discretization", T, r_eff, 2.0 * (n - T) / T, check_discretization_bound(g, T, mode));
  }
  emit(opt, rows_to_payload(rows, opt.format, ""));
  if (failed) {
    std::cerr << "error: invariant: " << first_failure << "\n";
    return 4;
  }
  return 0;
}

int run_dpp(const CommonOptions& opt, long n_max, long h_max, const std::string& mu_spec,
            double eps) {
  const GameInstance g = load_game(opt);
  const StageMode mode = stage_mode(opt);
  if (n_max < 2 || h_max < 1) throw std::invalid_argument("dpp needs --n-max >= 2, --h-max >= 1");
  const std::vector<double> mu_list = parse_real_list(mu_spec);

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"check", "index", "h", "residual", "threshold", "pass"});
  bool failed = false;
  std::string first_failure;
  auto push = [&](const std::string& check, const std::string& index, long h, double residual,
                  double threshold) {
    const bool ok = residual <= threshold;
    rows.push_back({check, index, std::to_string(h), format_double(residual),
                    format_double(threshold), ok ? "yes" : "no"});
    if (!ok && !failed) {
      failed = true;
      first_failure = check + " residual " + format_double(residual) + " above " +
                      format_double(threshold) + " at index=" + index +
                      " h=" + std::to_string(h);
    }
  };

  const auto family = finite_horizon_values(g, n_max, mode);
  for (long n = 1; n < n_max; ++n)
    for (long h = 1; h <= h_max && n + h <= n_max; ++h) {
      const ValueFunction prop =
          propagate_zeta(g, family[static_cast<std::size_t>(n - 1)], h, static_cast<double>(n), mode);
      push("zeta-composition", std::to_string(n), h,
           sup_distance(prop, family[static_cast<std::size_t>(n + h - 1)]), 1e-12 + eps);
    }

  for (double mu : mu_list) {
    const ValueFunction w = discounted_values(g, mu, opt.tol, mode);
    for (long h = 1; h <= h_max; ++h) {
      const ValueFunction prop = propagate_xi(g, w, h, mu, mode);
      push("xi-propagation", format_double(mu), h, sup_distance(prop, w),
           opt.tol * ((1.0 - mu) / mu + 1.0) + 1e-12 + eps);
    }
  }

  SolutionFamily sub_family;
  sub_family.kind = FamilyKind::horizon;
  for (long n = 1; n <= n_max; ++n) {
    sub_family.index.push_back(static_cast<double>(n));
    sub_family.values.push_back(family[static_cast<std::size_t>(n - 1)]);
  }
  std::vector<long> h_set;
  for (long h = 1; h <= h_max; ++h) h_set.push_back(h);
  push("subsolution-horizon", "family", h_max,
       check_subsolution(g, sub_family, h_set, eps, false, mode), 1e-12);
  push("supersolution-horizon", "family", h_max,
       check_subsolution(g, sub_family, h_set, eps, true, mode), 1e-12);

  emit(opt, rows_to_payload(rows, opt.format, ""));
  if (failed) {
    std::cerr << "error: invariant: " << first_failure << "\n";
    return 4;
  }
  return 0;
}

int run_oracle(const CommonOptions& opt, long n, std::uint64_t cap) {
  const GameInstance g = load_game(opt);
  if (opt.mode != "pure")
    throw std::invalid_argument("the oracle compares sequential-move values; use --mode pure");
  const ValueFunction oracle = brute_force_value(g, n, BruteForceCaps{cap});
  const ValueFunction dp = finite_horizon_values(g, n, PureMaximin{}).back();
  const double discrepancy = sup_distance(oracle, dp);

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"state", "dp", "oracle", "diff"});
  for (std::size_t s = 0; s < g.num_states(); ++s)
    rows.push_back({g.states[s], format_double(dp.values[s]), format_double(oracle.values[s]),
                    format_double(oracle.values[s] - dp.values[s])});
  emit(opt, rows_to_payload(rows, opt.format, ""));

  if (discrepancy <= 1e-12) {
    std::cout << "PASS, max discrepancy <= 1e-12 (observed " << format_double(discrepancy)
              << ")\n";
    return 0;
  }
  std::cerr << "error: invariant: oracle mismatch, max discrepancy " << format_double(discrepancy)
            << " exceeds 1e-12\n";
  return 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite zero-sum dynamic game laboratory"};
  app.require_subcommand(1);

  CommonOptions opt;

  auto* validate = app.add_subcommand("validate", "check a game description");
  add_game_options(validate, opt);

  auto* solve = app.add_subcommand("solve", "finite-horizon or discounted values");
  add_game_options(solve, opt);
  add_mode_options(solve, opt);
  add_output_options(solve, opt);
  std::optional<double> horizon, solve_mu, solve_lambda;
  solve->add_option("--horizon", horizon, "time horizon (integer or fractional)");
  solve->add_option("--mu", solve_mu, "stopping probability in (0,1)");
  solve->add_option("--lambda", solve_lambda, "discount rate > 0");

  auto* scan = app.add_subcommand("scan", "horizon/discount gap scan");
  add_game_options(scan, opt);
  add_mode_options(scan, opt);
  add_output_options(scan, opt);
  std::string n_spec, pairing_name = "exp", kappa_p0_spec, kappa_out;
  scan->add_option("--n", n_spec, "horizon list, e.g. 1:256:geometric16 or 1,2,4")->required();
  scan->add_option("--pairing", pairing_name, "mu pairing: exp (mu*(1/n)) | inverse (1/n)")
      ->check(CLI::IsMember({"exp", "inverse"}));
  scan->add_option("--kappa-p0", kappa_p0_spec, "emit kappa tables over this p0 list");
  scan->add_option("--kappa-out", kappa_out, "kappa table output path (default: stdout)");

  auto* estimates = app.add_subcommand("estimates", "scaling/discretization estimate sweeps");
  add_game_options(estimates, opt);
  add_mode_options(estimates, opt);
  add_output_options(estimates, opt);
  std::string t_spec, lambda_spec, r_spec = "1.5";
  estimates->add_option("--T", t_spec, "horizon list (reals)");
  estimates->add_option("--lambda", lambda_spec, "rate list (reals)");
  estimates->add_option("--r", r_spec, "scaling ratio list, entries > 1");

  auto* dpp = app.add_subcommand("dpp", "composition + sub/supersolution battery");
  add_game_options(dpp, opt);
  add_mode_options(dpp, opt);
  add_output_options(dpp, opt);
  long n_max = 32, h_max = 8;
  double eps = 0.0;
  std::string mu_spec = "0.5,0.1";
  dpp->add_option("--n-max", n_max, "largest horizon in the battery");
  dpp->add_option("--h-max", h_max, "largest propagation depth");
  dpp->add_option("--mu", mu_spec, "stopping probabilities for the discount battery");
  dpp->add_option("--eps", eps, "slack added to the sub/supersolution inequalities");

  auto* oracle = app.add_subcommand("oracle", "brute-force sup-inf comparison");
  add_game_options(oracle, opt);
  add_mode_options(oracle, opt);
  add_output_options(oracle, opt);
  long oracle_n = 3;
  std::uint64_t oracle_cap = 1u << 20;
  oracle->add_option("--n", oracle_n, "horizon for the enumeration");
  oracle->add_option("--cap", oracle_cap, "max number of enumerated policies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 1;
  }

  try {
    if (validate->parsed()) return run_validate(opt);
    if (solve->parsed()) return run_solve(opt, horizon, solve_mu, solve_lambda);
    if (scan->parsed()) return run_scan(opt, n_spec, pairing_name, kappa_p0_spec, kappa_out);
    if (estimates->parsed()) return run_estimates(opt, t_spec, lambda_spec, r_spec);
    if (dpp->parsed()) return run_dpp(opt, n_max, h_max, mu_spec, eps);
    if (oracle->parsed()) return run_oracle(opt, oracle_n, oracle_cap);
    std::cerr << "error: config: no subcommand\n";
    return 1;
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) std::cerr << "error: validation: " << issue << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "error: cap: " << e.what() << "\n";
    return 3;
  } catch (const LpError& e) {
    std::cerr << "error: invariant: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
