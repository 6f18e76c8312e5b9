// Copyright 2026 The prerating Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. `acceptance <name>` runs a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "prerating/prerating.hpp"

namespace {

using namespace prerating;
using Clock = std::chrono::steady_clock;

// Tolerances and budgets.
constexpr double kPublishedRoundingTol = 1.0;     // rating points after rounding
constexpr double kEqualScoreTol = 1e-4;           // rating points before rounding
constexpr double kGoldenBudgetSeconds = 5.0;
constexpr double kSwissMinAssertedShare = 0.80;
constexpr double kResidualTol = 1e-7;             // rating points
constexpr double kPredictionTol = 1e-6;           // score points
constexpr double kResidualBudgetSeconds = 60.0;
constexpr int kRandomTournaments = 100;
constexpr std::size_t kMaxRandomPlayers = 30;
constexpr int kOracleInstances = 1000;
constexpr double kGridTol = 0.01;                 // rating points
constexpr double kSlopeRelTol = 1e-6;
constexpr double kCentralDifferenceStep = 1e-3;
constexpr double kComplementTol = 1e-15;
constexpr double kTranslationTol = 1e-6;
constexpr double kDrawResidualTol = 1e-9;

const std::string kFixtures = PRERATING_FIXTURE_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 8) failures.push_back(what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

EquilibriumResult solve_default(const Tournament& t, EquilibriumConfig cfg = {}) {
  return solve_equilibrium(t, {}, default_bounds(t), {}, cfg);
}

// ---------------------------------------------------------------------------

Outcome round_robin_golden() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto m = fixture::load_manifest(kFixtures + "/interzonal1970");
  const Tournament t = fixture::synthesize_round_robin(m);
  const auto r = solve_default(t);
  o.require(r.converged, "solver did not converge");
  o.require(std::abs(initial_vector(t, {})[0] - 2557.0) == 0.0, "start is not uniform 2557");

  double worst = 0.0;
  for (const auto& row : m.rows) {
    const double ppr = rating_of(t, r.ratings, row.id);
    const double dev = std::abs(static_cast<double>(std::llround(ppr)) - static_cast<double>(*row.ppr));
    worst = std::max(worst, dev);
    o.require(dev <= kPublishedRoundingTol, fmt("%s: %.3f vs published %lld", row.id.c_str(), ppr, *row.ppr));
  }
  std::map<std::int64_t, std::vector<double>> by_score;
  for (std::size_t i = 0; i < t.size(); ++i) by_score[t.totals(i).points.units()].push_back(r.ratings[i]);
  double spread = 0.0;
  for (const auto& [pts, v] : by_score) spread = std::max(spread, *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end()));
  o.require(spread <= kEqualScoreTol, fmt("equal-score spread %.3e", spread));
  const double secs = seconds_since(t0);
  o.require(secs < kGoldenBudgetSeconds, fmt("took %.2f s", secs));
  o.detail = fmt("%zu rows, max rounded deviation %.0f, equal-score spread %.1e, %d iterations, %.3f s", m.rows.size(),
                 worst, spread, r.iterations, secs);
  return o;
}

Outcome swiss_golden() {
  Outcome o;
  std::size_t total = 0, asserted = 0, excluded = 0;
  for (const char* name : {"palma2017", "sharjah2017"}) {
    const auto m = fixture::load_manifest(kFixtures + "/" + name);
    total += m.rows.size();
    if (!m.has_games()) {
      excluded += m.rows.size();
      continue;
    }
    const Tournament t = fixture::load_files(m);
    const ClampBounds b = default_bounds(t);
    const auto r = solve_equilibrium(t, {}, b, {}, {});
    const RatingVector tpr = tpr_map(t, resolved_initial_ratings(t), {}, b, {});
    o.require(r.converged, std::string(name) + ": solver did not converge");
    for (const auto& row : m.rows) {
      if (m.is_excluded(row.id)) {
        ++excluded;
        continue;
      }
      ++asserted;
      const std::size_t i = t.require_index(row.id);
      o.require(std::abs(std::llround(r.ratings[i]) - *row.ppr) <= kPublishedRoundingTol, row.id + ": PPR");
      o.require(std::abs(std::llround(tpr[i]) - *row.tpr) <= kPublishedRoundingTol, row.id + ": TPR");
    }
  }
  const double share = total ? static_cast<double>(asserted) / static_cast<double>(total) : 0.0;
  o.require(share >= kSwissMinAssertedShare,
            fmt("%zu of %zu rows asserted (%.0f%%), %zu excluded for missing pairing records", asserted, total,
                100 * share, excluded));
  o.detail = fmt("%zu of %zu rows asserted", asserted, total);
  return o;
}

void check_fixed_point(Outcome& o, const Tournament& t, const std::string& label, const EquilibriumConfig& cfg,
                       int& converged, double& worst_residual, double& worst_error) {
  const ClampBounds b = default_bounds(t);
  const auto r = solve_equilibrium(t, {}, b, {}, cfg);
  if (!r.converged) return;
  ++converged;
  const auto v = verify_equilibrium(t, r.ratings, {}, b, {});
  worst_residual = std::max(worst_residual, v.residual);
  worst_error = std::max(worst_error, v.max_interior_error);
  o.require(v.residual <= kResidualTol, fmt("%s: residual %.3e", label.c_str(), v.residual));
  o.require(v.max_interior_error <= kPredictionTol, fmt("%s: prediction error %.3e", label.c_str(), v.max_interior_error));
}

Outcome fixed_point_residual() {
  Outcome o;
  const auto t0 = Clock::now();
  int runs = 0, converged = 0;
  double worst_residual = 0.0, worst_error = 0.0;

  std::vector<std::string> skipped;
  for (const char* name : {"interzonal1970", "palma2017", "sharjah2017"}) {
    const auto m = fixture::load_manifest(kFixtures + "/" + name);
    if (!m.has_games()) {
      skipped.push_back(name);
      continue;
    }
    ++runs;
    check_fixed_point(o, fixture::load_files(m), name, {}, converged, worst_residual, worst_error);
  }

  EquilibriumConfig cfg;
  cfg.damping = 0.5;
  std::mt19937_64 rng(20261019);
  for (int k = 0; k < kRandomTournaments; ++k) {
    ScoreSource src;
    src.seed = rng();
    src.rule = k % 3 == 2 ? ResultRule::uniform : ResultRule::elo;
    Tournament t;
    if (k % 2 == 0) {
      t = generate_round_robin(2 + rng() % (kMaxRandomPlayers - 1), src);
    } else {
      const std::size_t n = 2 * (2 + rng() % (kMaxRandomPlayers / 2 - 1));
      t = generate_random_pairing(n, 3 + static_cast<int>(rng() % 9), src);
    }
    ++runs;
    check_fixed_point(o, t, fmt("random #%d (n=%zu)", k, t.size()), cfg, converged, worst_residual, worst_error);
  }
  const double secs = seconds_since(t0);
  o.require(secs <= kResidualBudgetSeconds, fmt("took %.2f s", secs));
  o.detail = fmt("%d/%d runs converged, max residual %.1e, max prediction error %.1e, %.2f s", converged, runs,
                 worst_residual, worst_error, secs);
  if (!skipped.empty()) {
    o.detail += "; no games for";
    for (const auto& s : skipped) o.detail += " " + s;
  }
  return o;
}

Outcome tpr_oracle() {
  Outcome o;
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> at(500, 3500);
  const EloParams p;
  double worst_grid = 0.0, worst_slope = 0.0;
  for (int i = 0; i < kOracleInstances; ++i) {
    const auto in = oracle::random_instance(rng);
    const auto [mn, mx] = std::minmax_element(in.opp.begin(), in.opp.end());
    const double grid = oracle::grid_root(in.opp, in.m, *mn - p.bracket_pad, *mx + p.bracket_pad);
    const double y = solve_tpr(in.opp, in.m, p);
    worst_grid = std::max(worst_grid, std::abs(y - grid));
    o.require(std::abs(y - grid) <= kGridTol, fmt("instance %d: solver %.6f, grid %.2f", i, y, grid));

    const double x = at(rng);
    const double fd = oracle::central_difference(x, in.opp, kCentralDifferenceStep);
    const double rel = std::abs(g_prime(x, in.opp, p) - fd) / std::abs(fd);
    worst_slope = std::max(worst_slope, rel);
    o.require(rel <= kSlopeRelTol, fmt("instance %d: slope rel error %.3e", i, rel));
  }
  o.detail = fmt("%d instances, max |solver - grid| %.4f, max slope rel error %.1e", kOracleInstances, worst_grid,
                 worst_slope);
  return o;
}

Outcome property_suite() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> rating(0, 4000), shift(-600, 600);
  int checks = 0;

  for (int i = 0; i < 10000; ++i, ++checks) {
    const double a = rating(rng), b = rating(rng);
    o.require(std::abs(expected_score(a, b) + expected_score(b, a) - 1.0) <= kComplementTol, "complement identity");
  }
  for (int i = 0; i < 2000; ++i, ++checks) {
    const auto in = oracle::random_instance(rng);
    double y1 = rating(rng), y2 = rating(rng);
    if (y1 > y2) std::swap(y1, y2);
    if (y1 < y2) o.require(g(y1, in.opp) < g(y2, in.opp), "g strictly increasing");
  }
  for (int i = 0; i < 2000; ++i, ++checks) {
    const auto in = oracle::random_instance(rng);
    const double k = static_cast<double>(in.opp.size());
    std::uniform_real_distribution<double> m(0.001 * k, 0.999 * k);
    double m1 = m(rng), m2 = m(rng);
    if (m1 > m2) std::swap(m1, m2);
    if (m1 < m2) o.require(solve_tpr(in.opp, m1) < solve_tpr(in.opp, m2), "solve_tpr increasing in m");
  }
  for (int i = 0; i < 2000; ++i, ++checks) {
    auto in = oracle::random_instance(rng);
    const double base = solve_tpr(in.opp, in.m);
    const double d = shift(rng);
    for (double& v : in.opp) v += d;
    o.require(std::abs(solve_tpr(in.opp, in.m) - base - d) <= kTranslationTol, fmt("translation by %.3f", d));
  }
  for (int i = 0; i < 200; ++i, ++checks) {
    const Tournament t = generate_random_pairing(10, 4, {.seed = rng(), .rule = ResultRule::uniform});
    double lo = rating(rng), hi = rating(rng);
    if (lo > hi) std::swap(lo, hi);
    const ClampBounds b{lo, hi + 1};
    std::vector<double> x(t.size());
    for (double& v : x) v = rating(rng);
    for (double v : tpr_map(t, RatingVector(x), {}, b, {})) o.require(v >= b.lo && v <= b.hi, "tpr_map within clamp");
    EquilibriumConfig cfg;
    cfg.damping = 0.5;
    cfg.max_iters = 200;
    for (double v : solve_equilibrium(t, {}, b, {}, cfg).ratings) o.require(v >= b.lo && v <= b.hi, "equilibrium within clamp");
  }
  for (int i = 0; i < 10; ++i, ++checks) {
    const std::uint64_t seed = rng();
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const Tournament t = generate_random_pairing(16, 7, {.seed = seed});
      const ClampBounds b = default_bounds(t);
      EquilibriumConfig cfg;
      cfg.damping = 0.5;
      const auto r = solve_equilibrium(t, {}, b, {}, cfg);
      const auto base = tpr_map(t, r.start, {}, b, {});
      const auto meta = io::make_meta(t, {}, b, {}, cfg, r);
      std::string bytes;
      for (auto f : {io::ReportFormat::json, io::ReportFormat::csv, io::ReportFormat::markdown})
        bytes += io::emit_report(r, base, t, f, meta);
      if (rep == 0)
        first = bytes;
      else
        o.require(bytes == first, fmt("report bytes differ for seed %llu", static_cast<unsigned long long>(seed)));
    }
  }
  o.detail = fmt("%d checks", checks);
  return o;
}

Outcome degenerate_suite() {
  Outcome o;
  {
    const Tournament t({{"a", "A", 2000.0}, {"b", "B", 2200.0}}, {{"a", "b", Score::half()}});
    const auto r = solve_default(t);
    o.require(r.converged && r.iterations <= 2, "draw pair: converged within 2 iterations");
    o.require(std::abs(r.ratings[0] - 2100) <= kDrawResidualTol && std::abs(r.ratings[1] - 2100) <= kDrawResidualTol,
              fmt("draw pair: (%.6f, %.6f)", r.ratings[0], r.ratings[1]));
    o.require(r.residual <= kDrawResidualTol, fmt("draw pair: residual %.3e", r.residual));
  }
  {
    const Tournament t = generate_round_robin(10, {.seed = 3, .rule = ResultRule::all_draws});
    const double avg = initial_vector(t, {})[0];
    const auto r = solve_default(t);
    o.require(r.converged, "all-draws round robin: converged");
    for (double v : r.ratings) o.require(std::abs(v - avg) <= kResidualTol, fmt("all-draws: %.9f vs %.9f", v, avg));
  }
  {
    // Top player wins every game, bottom player loses every game.
    std::vector<Player> ps;
    for (int i = 0; i < 8; ++i) ps.push_back({"p" + std::to_string(i), "", 2300.0 + 25 * i});
    std::vector<GameRecord> gs;
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j)
        gs.push_back({ps[i].id, ps[j].id, i == 0 || j == 7 ? Score::one() : Score::half()});
    const Tournament t(ps, gs);
    const ClampBounds b = default_bounds(t);
    const auto r = solve_equilibrium(t, {}, b, {}, {});
    const auto v = verify_equilibrium(t, r.ratings, {}, b, {});
    o.require(r.converged, "perfect/zero round robin: converged");
    o.require(v.players[0].boundary && v.players[7].boundary, "perfect/zero scores routed to the boundary solve");
    std::vector<double> opp;
    for (std::size_t j : t.opponents(0)) opp.push_back(r.ratings[j]);
    o.require(std::abs(r.ratings[0] - solve_boundary(opp, 7.0)) <= kResidualTol, "perfect score matches solve_boundary");
    o.require(r.ratings[0] > r.ratings[1] && r.ratings[7] < r.ratings[6], "boundary players ranked outside the field");
  }
  {
    const Tournament t({{"a", "A", 2400.0}, {"b", "B", 2400.0}}, {{"a", "b", Score::one()}});
    EquilibriumConfig cfg;
    cfg.damping = 0.5;
    const auto r = solve_equilibrium(t, {}, ClampBounds{0, 5000}, {}, cfg);
    o.require(r.converged, "decisive pair: converged");
    o.require(std::abs((r.ratings[0] - r.ratings[1]) - oracle::equal_opponents_root(0, 1, 0.75)) <= kTranslationTol,
              fmt("decisive pair gap %.6f", r.ratings[0] - r.ratings[1]));
  }
  o.detail = "draw pair, all-draws round robin, perfect/zero round robin, decisive pair";
  return o;
}

struct Criterion {
  const char* name;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"round-robin-golden", "Round-robin golden table (Interzonal)", round_robin_golden},
      {"swiss-golden", "Swiss golden tables (Palma, Sharjah)", swiss_golden},
      {"fixed-point-residual", "Fixed-point residual on fixtures and random tournaments", fixed_point_residual},
      {"tpr-oracle", "TPR oracle equivalence", tpr_oracle},
      {"properties", "Property suite", property_suite},
      {"degenerate", "Degenerate suite", degenerate_suite},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only != c.name) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  %-22s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, c.title, o.detail.c_str());
    for (const auto& f : o.failures) std::printf("        - %s\n", f.c_str());
    if (!o.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed ? 1 : 0;
}
