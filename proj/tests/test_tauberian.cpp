#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tauberlab/games.hpp"
#include "tauberlab/report.hpp"
#include "tauberlab/tauberian.hpp"

using namespace tauberlab;

namespace {

const StageMode kPure = PureMaximin{};
const StageMode kMixed = MixedValue{1e-9};

SolutionFamily horizon_family(const GameInstance& g, long n_max, const StageMode& mode) {
  SolutionFamily fam;
  fam.kind = FamilyKind::horizon;
  const auto values = finite_horizon_values(g, n_max, mode);
  for (long n = 1; n <= n_max; ++n) {
    fam.index.push_back(static_cast<double>(n));
    fam.values.push_back(values[static_cast<std::size_t>(n - 1)]);
  }
  return fam;
}

ValueFunction constant_vf(std::size_t n, double c) {
  return ValueFunction{std::vector<double>(n, c), 0.0, 1.0};
}

}  // namespace

TEST_CASE("gap scan on the closed-form games") {
  SECTION("constant cost: both families coincide for every n") {
    const ScanReport rep =
        gap_scan(constant_cost(), {1, 2, 4, 16, 64}, kPure, Pairing::exp_conversion, 1e-12);
    for (const auto& r : rep.records) CHECK(r.gap_sup <= 1e-11);
  }
  SECTION("matching pennies chain, mixed, raw 1/n pairing: exact agreement") {
    const ScanReport rep =
        gap_scan(matching_pennies_chain(), {2, 4, 8, 32, 128}, kMixed, Pairing::inverse, 1e-13);
    for (const auto& r : rep.records) {
      CHECK(r.mu == 1.0 / static_cast<double>(r.n));
      CHECK(r.gap_sup <= 1e-9);
    }
  }
  SECTION("go-to-good, conversion pairing: gap is e^{-1/n} - (1 - 1/n)") {
    const ScanReport rep =
        gap_scan(go_to_good(), {2, 4, 16, 64}, kPure, Pairing::exp_conversion, 1e-13);
    for (const auto& r : rep.records) {
      const double x = 1.0 / static_cast<double>(r.n);
      const double expected = std::exp(-x) - (1.0 - x);
      CHECK(r.gap_sup == Catch::Approx(expected).margin(1e-11));
      CHECK(r.gap_sup <= 0.5 * x * x + 1e-11);
    }
  }
  SECTION("one-sided gaps compose the sup gap exactly") {
    const ScanReport rep =
        gap_scan(two_absorbing(), {1, 3, 9, 27}, kPure, Pairing::exp_conversion, 1e-12);
    for (const auto& r : rep.records) {
      CHECK(r.gap_h_minus_d <= r.gap_sup);
      CHECK(r.gap_d_minus_h <= r.gap_sup);
      CHECK(r.gap_sup == std::max(r.gap_h_minus_d, r.gap_d_minus_h));
    }
  }
  SECTION("argument validation") {
    CHECK_THROWS_AS(gap_scan(go_to_good(), {}, kPure, Pairing::exp_conversion),
                    std::invalid_argument);
    CHECK_THROWS_AS(gap_scan(go_to_good(), {4, 2}, kPure, Pairing::exp_conversion),
                    std::invalid_argument);
    CHECK_THROWS_AS(gap_scan(go_to_good(), {1, 2}, kPure, Pairing::inverse),
                    std::invalid_argument);
  }
}

TEST_CASE("uniform-convergence surrogate on the bundled battery") {
  const double tol = 1e-12;
  for (const GameInstance& g : bundled_games()) {
    for (const StageMode& mode : {kPure, kMixed}) {
      const ScanReport rep = gap_scan(g, {16, 256}, mode, Pairing::exp_conversion, tol);
      const double d16 = rep.records[0].gap_sup;
      const double d256 = rep.records[1].gap_sup;
      INFO(g.name << " mode=" << rep.mode << " D(16)=" << d16 << " D(256)=" << d256);
      CHECK(d256 <= 0.1);
      CHECK(d256 <= d16 + 2.0 * tol);
    }
  }
}

TEST_CASE("one-sided gaps shrink under the raw 1/n pairing") {
  // finite surrogate of the one-sided asymptotic inequalities: with the
  // direct pairing mu = 1/n, each one-sided excess eventually sits under
  // any fixed eps, in both directions. Each scanned family value carries a
  // fixed-point error up to tol, so the decrease comparison gets 2*tol.
  const double tol = 1e-10;
  for (const GameInstance& g : bundled_games()) {
    const ScanReport rep = gap_scan(g, {16, 256}, kPure, Pairing::inverse, tol);
    const auto& early = rep.records[0];
    const auto& late = rep.records[1];
    CHECK(late.gap_h_minus_d <= 0.1);
    CHECK(late.gap_d_minus_h <= 0.1);
    CHECK(late.gap_sup <= early.gap_sup + 2.0 * tol);
  }
}

TEST_CASE("the non-constant-limit game agrees per state, not through a constant") {
  const ScanReport rep = gap_scan(two_absorbing(), {256}, kPure, Pairing::exp_conversion, 1e-12);
  const auto& r = rep.records[0];
  double spread = 0.0;
  for (std::size_t s = 0; s < r.horizon_values.size(); ++s) {
    CHECK(std::fabs(r.horizon_values[s] - r.discounted_values[s]) <= 0.02);
    for (std::size_t t = 0; t < s; ++t)
      spread = std::max(spread, std::fabs(r.horizon_values[s] - r.horizon_values[t]));
  }
  CHECK(spread > 0.9);  // limits differ across states
}

TEST_CASE("horizon scaling estimate") {
  SECTION("constant cost leaves the full bound") {
    CHECK(check_horizon_estimate(constant_cost(), 3.0, 1.5, kPure) ==
          Catch::Approx(1.0).margin(1e-11));
  }
  SECTION("go-to-good at T=2, r=1.5: gap 1/6 under bound 1") {
    CHECK(check_horizon_estimate(go_to_good(), 2.0, 1.5, kPure) ==
          Catch::Approx(1.0 - 1.0 / 6.0).margin(1e-11));
  }
  SECTION("neighbor horizons: gap below 2/T") {
    for (long T : {2L, 5L, 17L}) {
      const double r = static_cast<double>(T + 1) / static_cast<double>(T);
      CHECK(check_horizon_estimate(go_to_good(), static_cast<double>(T), r, kPure) >= 0.0);
    }
  }
  SECTION("seeded sweep stays non-negative") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
      const GameInstance g = random_game(3, 2, 2, 500 + trial, false);
      const double T = 0.5 + 20.0 * rng.next_double();
      const double r = 1.01 + 0.99 * rng.next_double();
      CHECK(check_horizon_estimate(g, T, r, kPure) >= 0.0);
    }
  }
  CHECK_THROWS_AS(check_horizon_estimate(go_to_good(), 0.0, 1.5, kPure), std::invalid_argument);
  CHECK_THROWS_AS(check_horizon_estimate(go_to_good(), 1.0, 1.0, kPure), std::invalid_argument);
}

TEST_CASE("discount scaling estimate") {
  const double tol = 1e-10;
  SECTION("constant cost leaves the full bound") {
    CHECK(check_discount_estimate(constant_cost(), 0.3, 1.5, tol, kPure) ==
          Catch::Approx(1.0).margin(1e-9));
  }
  SECTION("go-to-good closed form") {
    for (double lam : {0.2, 0.8}) {
      const double gap = std::exp(-lam) - std::exp(-2.0 * lam);
      CHECK(check_discount_estimate(go_to_good(), lam, 2.0, tol, kPure) ==
            Catch::Approx(2.0 - gap).margin(1e-9));
    }
  }
  SECTION("seeded sweep above the fixed-point allowance") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
      const GameInstance g = random_game(3, 2, 2, 600 + trial, false);
      const double lambda = 0.05 + 1.5 * rng.next_double();
      const double r = 1.01 + 0.99 * rng.next_double();
      CHECK(check_discount_estimate(g, lambda, r, tol, kPure) >= -2.0 * tol);
    }
  }
}

TEST_CASE("discretization bound") {
  SECTION("integer horizons have no gap") {
    CHECK(check_discretization_bound(go_to_good(), 4.0, kPure) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("constant cost keeps the whole bound") {
    CHECK(check_discretization_bound(constant_cost(), 2.5, kPure) ==
          Catch::Approx(2.0 * 0.5 / 2.5).margin(1e-11));
  }
  SECTION("go-to-good at T=2.5: gap 1/15 under bound 0.4") {
    CHECK(check_discretization_bound(go_to_good(), 2.5, kPure) ==
          Catch::Approx(0.4 - 1.0 / 15.0).margin(1e-11));
  }
  SECTION("seeded fractional sweep passes") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
      const GameInstance g = random_game(3, 2, 2, 700 + trial, trial % 2 == 0);
      double T = 0.5 + 20.0 * rng.next_double();
      if (T == std::floor(T)) T += 0.5;
      CHECK(check_discretization_bound(g, T, kPure) >= 0.0);
    }
  }
}

TEST_CASE("sub/supersolution checks") {
  SECTION("the solver's own horizon family satisfies both inequalities") {
    for (const StageMode& mode : {kPure, kMixed}) {
      const GameInstance g = mode_id(mode) == "mixed" ? matching_pennies_chain() : go_to_good();
      const SolutionFamily fam = horizon_family(g, 32, mode);
      const std::vector<long> h_set{1, 2, 3, 4, 5, 6, 7, 8};
      CHECK(check_subsolution(g, fam, h_set, 0.0, false, mode) <= 1e-12);
      CHECK(check_subsolution(g, fam, h_set, 0.0, true, mode) <= 1e-12);
    }
  }
  SECTION("the solver's own discounted family satisfies both inequalities") {
    const GameInstance g = two_absorbing();
    const double tol = 1e-12;
    SolutionFamily fam;
    fam.kind = FamilyKind::discount;
    for (double mu : {0.5, 0.2, 0.05}) {
      fam.index.push_back(mu);
      fam.values.push_back(discounted_values(g, mu, tol, kPure));
    }
    for (long h : {1L, 4L, 8L}) {
      for (std::size_t i = 0; i < fam.index.size(); ++i) {
        const double mu = fam.index[i];
        const double allowance = tol * ((1.0 - mu) / mu + 1.0) + 1e-12;
        SolutionFamily single{FamilyKind::discount, {mu}, {fam.values[i]}};
        CHECK(check_subsolution(g, single, {h}, 0.0, false, kPure) <= allowance);
        CHECK(check_subsolution(g, single, {h}, 0.0, true, kPure) <= allowance);
      }
    }
  }
  SECTION("the zero family is a subsolution, the one family a supersolution") {
    const GameInstance g = two_absorbing();
    SolutionFamily zeros, ones;
    zeros.kind = ones.kind = FamilyKind::horizon;
    for (long n : {1L, 2L, 3L, 4L, 6L, 8L}) {
      zeros.index.push_back(static_cast<double>(n));
      zeros.values.push_back(constant_vf(g.num_states(), 0.0));
      ones.index.push_back(static_cast<double>(n));
      ones.values.push_back(constant_vf(g.num_states(), 1.0));
    }
    CHECK(check_subsolution(g, zeros, {1, 2}, 0.0, false, kPure) <= 0.0);
    CHECK(check_subsolution(g, ones, {1, 2}, 0.0, true, kPure) <= 0.0);
  }
  SECTION("a family missing all tested members is an error") {
    const GameInstance g = go_to_good();
    SolutionFamily fam;
    fam.kind = FamilyKind::horizon;
    fam.index = {1.0, 10.0};
    fam.values = {constant_vf(2, 0.0), constant_vf(2, 0.0)};
    CHECK_THROWS_AS(check_subsolution(g, fam, {2}, 0.0, false, kPure), std::invalid_argument);
  }
}

TEST_CASE("kappa diagnostics") {
  auto family_from = [](const std::vector<double>& idx,
                        const std::function<double(double)>& u) {
    IndexedFamily f;
    for (double t : idx) {
      f.index.push_back(t);
      f.values.push_back(ValueFunction{std::vector<double>{u(t)}, -10.0, 10.0});
    }
    return f;
  };
  std::vector<double> grid;
  for (double t = 1.0; t <= 256.0; t *= 1.0905077326652577) grid.push_back(t);  // 2^(1/8) steps

  SECTION("constant family has kappa zero") {
    const IndexedFamily f = family_from(grid, [](double) { return 0.4; });
    CHECK(kappa_horizon(f, 64.0, 2.0).kappa == 0.0);
    CHECK(kappa_discount(f, 0.1, 2.0).kappa == 0.0);
  }
  SECTION("increasing family: differences against smaller indices are negative") {
    const IndexedFamily f = family_from(grid, [](double t) { return 1.0 - 1.0 / t; });
    CHECK(kappa_horizon(f, 64.0, 2.0).kappa == 0.0);  // p = 1 term pins it at zero
  }
  SECTION("decreasing family exposes a positive kappa") {
    const IndexedFamily f = family_from(grid, [](double t) { return 1.0 / t; });
    const KappaResult k = kappa_horizon(f, 64.0, 2.0, 64);
    // sup over p of (1/(T/p) - 1/T) = (p0 - 1)/T at the grid edge
    CHECK(k.kappa == Catch::Approx(1.0 / 64.0).epsilon(0.08));
    CHECK(k.kappa > 0.0);
    CHECK(k.samples.size() == 64);
  }
  SECTION("solver family on go-to-good is monotone, so kappa vanishes") {
    const auto values = finite_horizon_values(go_to_good(), 64, kPure);
    IndexedFamily f;
    for (long n = 1; n <= 64; ++n) {
      f.index.push_back(static_cast<double>(n));
      f.values.push_back(values[static_cast<std::size_t>(n - 1)]);
    }
    for (double p0 : {1.5, 2.0, 4.0}) CHECK(kappa_horizon(f, 32.0, p0).kappa == 0.0);
  }
  SECTION("tables are monotone in p0 and record the sampling rule") {
    const IndexedFamily f = family_from(grid, [](double t) { return std::cos(t) / t; });
    const KappaTable
        tbl = kappa_table(f, FamilyKind::horizon, {16.0, 64.0, 128.0}, {1.25, 1.5, 2.0, 4.0}, 16);
    for (const auto& row : tbl.kappa)
      for (std::size_t j = 1; j < row.size(); ++j) CHECK(row[j] >= row[j - 1]);
    CHECK(tbl.sampling_note.find("lower bound") != std::string::npos);
    CHECK(kappa_table_csv(tbl).find("kind,index,p0,kappa") != std::string::npos);
  }
}

TEST_CASE("scan reports serialize with the documented column order") {
  const ScanReport rep = gap_scan(go_to_good(), {2, 4}, kPure, Pairing::exp_conversion, 1e-12);
  const std::string csv = scan_report_csv(rep);
  CHECK(csv.find("# gap scan: game=go-to-good mode=pure pairing=exp; sup taken exactly over "
                 "the finite state set") != std::string::npos);
  CHECK(csv.find("n,mu,v[s0],v[s1],w[s0],w[s1],gap_v_minus_w,gap_w_minus_v,gap_sup") !=
        std::string::npos);
  const std::string table = scan_report_table(rep);
  CHECK(table.find("gap_sup") != std::string::npos);
}
