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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "prerating/rating_core.hpp"
#include "prerating/tournament.hpp"

namespace prerating {

enum class InitMode { average, initial_ratings, custom };
enum class UpdateScheme { simultaneous, sequential };

inline const char* to_string(InitMode m) {
  switch (m) {
    case InitMode::average: return "average";
    case InitMode::initial_ratings: return "initial";
    case InitMode::custom: return "custom";
  }
  return "?";
}

inline const char* to_string(UpdateScheme s) {
  return s == UpdateScheme::simultaneous ? "simultaneous" : "sequential";
}

struct EquilibriumConfig {
  static constexpr double kDefaultDamping = 1.0;
  static constexpr double kDefaultSupTol = 1e-7;
  static constexpr int kDefaultMaxIters = 10000;
  /// A step that meets sup_tol while the recomputed residual exceeds this
  /// multiple of sup_tol is treated as a stall.
  static constexpr double kStallFactor = 10.0;

  InitMode init = InitMode::average;
  std::optional<RatingVector> custom_start;  // required for InitMode::custom
  double damping = kDefaultDamping;
  double sup_tol = kDefaultSupTol;
  int max_iters = kDefaultMaxIters;
  UpdateScheme scheme = UpdateScheme::simultaneous;
  bool record_trajectory = true;
  unsigned threads = 1;  // simultaneous scheme only

  void check() const {
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("EquilibriumConfig: damping must be in (0, 1]");
    if (!(sup_tol > 0.0)) throw std::invalid_argument("EquilibriumConfig: sup_tol must be > 0");
    if (max_iters < 1) throw std::invalid_argument("EquilibriumConfig: max_iters must be >= 1");
    if (init == InitMode::custom && !custom_start)
      throw std::invalid_argument("EquilibriumConfig: custom init requires a start vector");
  }
};

enum class StopReason { converged, max_iters, stalled };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::max_iters: return "max_iters";
    case StopReason::stalled: return "stalled";
  }
  return "?";
}

struct EquilibriumResult {
  RatingVector ratings;
  double residual = 0.0;  // ||tpr_map(ratings) - ratings||_inf, recomputed at the end
  int iterations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iters;
  std::vector<double> trajectory;  // per-iteration sup-norm step
  RatingVector start;
  std::vector<std::size_t> clamped_low;  // players whose TPR at the result is clamped
  std::vector<std::size_t> clamped_high;
};

/// Starting vector for the iteration.
///
/// average: every player at the mean of the resolved initial ratings (the
/// tournament default stands in for missing ones). initial_ratings: r itself.
/// custom: cfg.custom_start.
inline RatingVector initial_vector(const Tournament& t, const EquilibriumConfig& cfg) {
  switch (cfg.init) {
    case InitMode::average: {
      std::vector<double> rated;
      std::string missing;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (auto r = t.resolved_rating(i))
          rated.push_back(*r);
        else
          missing += (missing.empty() ? "" : ", ") + t.player(i).id;
      }
      if (rated.empty()) throw std::invalid_argument("average init: no resolvable ratings (unrated: " + missing + ")");
      double s = 0.0;
      for (double r : rated) s += r;
      return RatingVector::uniform(t.size(), s / static_cast<double>(rated.size()));
    }
    case InitMode::initial_ratings:
      return resolved_initial_ratings(t);
    case InitMode::custom:
      if (!cfg.custom_start || !cfg.custom_start->covers(t))
        throw std::invalid_argument("custom init: start vector does not cover every player");
      return *cfg.custom_start;
  }
  throw std::logic_error("initial_vector: unknown init mode");
}

namespace detail {

inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline double map_residual(const Tournament& t, const RatingVector& x, const EloParams& p, const ClampBounds& b,
                           const CprSurrogateParams& c, std::vector<TprEntry>* detail = nullptr) {
  double r = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const TprEntry e = player_tpr(t, i, x, p, b, c);
    r = std::max(r, std::abs(e.value - x[i]));
    if (detail) (*detail)[i] = e;
  }
  return r;
}

}  // namespace detail

/// Damped fixed-point iteration of tpr_map.
///
/// Each iteration sets x <- (1 - damping) x + damping T(x), either from the
/// previous vector (simultaneous) or player by player using the freshest
/// values (sequential). The step is measured as ||x_new - x_old|| / damping so
/// the stopping rule does not tighten with heavier damping. When the step
/// meets sup_tol the residual ||T(x) - x|| is recomputed: at or below sup_tol
/// the run has converged; above kStallFactor * sup_tol it is reported as
/// stalled; in between iteration continues.
inline EquilibriumResult solve_equilibrium(const Tournament& t, const EloParams& p, const ClampBounds& b,
                                           const CprSurrogateParams& c, const EquilibriumConfig& cfg) {
  p.check();
  b.check();
  c.check();
  cfg.check();
  require_valid(t);

  EquilibriumResult res;
  res.start = initial_vector(t, cfg);
  RatingVector x = res.start;
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = b.apply(x[i]);

  const std::size_t n = t.size();
  RatingVector next = x;
  res.stop_reason = StopReason::max_iters;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (cfg.scheme == UpdateScheme::simultaneous) {
      detail::parallel_for(n, cfg.threads, [&](std::size_t i) {
        const double target = player_tpr(t, i, x, p, b, c).value;
        next[i] = cfg.damping == 1.0 ? target : (1.0 - cfg.damping) * x[i] + cfg.damping * target;
      });
    } else {
      next = x;
      for (std::size_t i = 0; i < n; ++i) {
        const double target = player_tpr(t, i, next, p, b, c).value;
        next[i] = cfg.damping == 1.0 ? target : (1.0 - cfg.damping) * next[i] + cfg.damping * target;
      }
    }
    const double step = sup_distance(next, x) / cfg.damping;
    std::swap(x, next);
    res.iterations = it;
    if (cfg.record_trajectory) res.trajectory.push_back(step);

    if (step <= cfg.sup_tol) {
      const double r = detail::map_residual(t, x, p, b, c);
      if (r <= cfg.sup_tol) {
        res.stop_reason = StopReason::converged;
        break;
      }
      if (r > EquilibriumConfig::kStallFactor * cfg.sup_tol) {
        res.stop_reason = StopReason::stalled;
        break;
      }
    }
  }

  std::vector<TprEntry> entries(n);
  res.residual = detail::map_residual(t, x, p, b, c, &entries);
  res.converged = res.stop_reason == StopReason::converged && res.residual <= cfg.sup_tol;
  for (std::size_t i = 0; i < n; ++i) {
    if (!entries[i].clamped) continue;
    (entries[i].raw < b.lo ? res.clamped_low : res.clamped_high).push_back(i);
  }
  res.ratings = std::move(x);
  return res;
}

struct PlayerCheck {
  double expected = 0.0;          // sum_j expected_score(x_i, x_{i_j})
  double prediction_error = 0.0;  // |expected - m_i|, score units
  double tpr = 0.0;               // clamped TPR_i(x)
  double slope = 0.0;             // g'_i at x_i
  bool boundary = false;
  bool clamped = false;
};

/// How far a rating vector is from being an equilibrium.
struct VerificationReport {
  std::vector<PlayerCheck> players;
  double residual = 0.0;              // ||tpr_map(x) - x||_inf, rating units
  double max_interior_error = 0.0;    // over interior-score players whose TPR is not clamped

  /// Residual within tolerance, and every unclamped interior player predicts
  /// its score to within its slope times the tolerance.
  bool is_equilibrium(double sup_tol) const {
    if (residual > sup_tol) return false;
    for (const auto& pc : players) {
      if (pc.boundary || pc.clamped) continue;
      if (pc.prediction_error > pc.slope * sup_tol + 1e-12) return false;
    }
    return true;
  }
};

inline VerificationReport verify_equilibrium(const Tournament& t, const RatingVector& x, const EloParams& p,
                                             const ClampBounds& b, const CprSurrogateParams& c) {
  if (!x.covers(t)) throw std::invalid_argument("verify: rating vector does not cover the tournament");
  require_valid(t);
  VerificationReport rep;
  rep.players.resize(t.size());
  std::vector<double> opp;
  for (std::size_t i = 0; i < t.size(); ++i) {
    opp.clear();
    for (std::size_t j : t.opponents(i)) opp.push_back(x[j]);
    PlayerCheck& pc = rep.players[i];
    pc.expected = g(x[i], opp, p);
    pc.prediction_error = std::abs(pc.expected - t.totals(i).points.value());
    pc.slope = g_prime(x[i], opp, p);
    const TprEntry e = player_tpr(t, i, x, p, b, c);
    pc.tpr = e.value;
    pc.boundary = e.boundary;
    pc.clamped = e.clamped;
    rep.residual = std::max(rep.residual, std::abs(e.value - x[i]));
    if (!pc.boundary && !pc.clamped) rep.max_interior_error = std::max(rep.max_interior_error, pc.prediction_error);
  }
  return rep;
}

struct Exploration {
  static constexpr double kDefaultClusterThreshold = 0.5;

  std::vector<EquilibriumResult> results;
  std::vector<std::vector<double>> distances;  // pairwise sup-distance between results
  std::vector<std::size_t> cluster_of;         // cluster label per result
  std::size_t cluster_count = 0;
};

/// Uniform random starts in [mean - spread, mean + spread] around the
/// average initial rating, clipped at zero.
inline std::vector<RatingVector> random_starts(const Tournament& t, std::size_t count, std::uint64_t seed,
                                               double spread = 400.0) {
  EquilibriumConfig avg;
  const double centre = initial_vector(t, avg)[0];
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-spread, spread);
  std::vector<RatingVector> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<double> v(t.size());
    for (double& r : v) r = std::max(0.0, centre + dist(rng));
    out.emplace_back(std::move(v));
  }
  return out;
}

/// Solves from each start and groups the results. Clustering is
/// single-linkage: two results share a cluster when a chain of results with
/// pairwise sup-distance <= threshold connects them. Labels follow first
/// appearance.
inline Exploration explore_equilibria(const Tournament& t, const EloParams& p, const ClampBounds& b,
                                      const CprSurrogateParams& c, const std::vector<RatingVector>& starts,
                                      EquilibriumConfig base = {},
                                      double threshold = Exploration::kDefaultClusterThreshold) {
  if (starts.empty()) throw std::invalid_argument("explore: no starts");
  Exploration ex;
  ex.results.resize(starts.size());
  const unsigned threads = base.threads;
  base.threads = 1;
  base.init = InitMode::custom;
  detail::parallel_for(starts.size(), threads, [&](std::size_t s) {
    EquilibriumConfig cfg = base;
    cfg.custom_start = starts[s];
    ex.results[s] = solve_equilibrium(t, p, b, c, cfg);
  });

  const std::size_t m = ex.results.size();
  ex.distances.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      ex.distances[i][j] = ex.distances[j][i] = sup_distance(ex.results[i].ratings, ex.results[j].ratings);

  std::vector<std::size_t> parent(m);
  for (std::size_t i = 0; i < m; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (ex.distances[i][j] <= threshold) parent[find(j)] = find(i);

  ex.cluster_of.assign(m, 0);
  std::vector<std::size_t> label(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t root = find(i);
    if (label[root] == m) label[root] = ex.cluster_count++;
    ex.cluster_of[i] = label[root];
  }
  return ex;
}

}  // namespace prerating
