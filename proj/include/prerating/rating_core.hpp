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
#include <span>
#include <stdexcept>
#include <vector>

#include "prerating/tournament.hpp"

namespace prerating {

/// Logistic Elo curve constants and root-finder settings.
struct EloParams {
  static constexpr double kDefaultScale = 400.0;
  static constexpr double kDefaultBase = 10.0;
  static constexpr double kDefaultRootTol = 1e-9;
  static constexpr double kDefaultBracketPad = 4000.0;

  double scale = kDefaultScale;
  double base = kDefaultBase;
  double root_tol = kDefaultRootTol;  // score units
  double bracket_pad = kDefaultBracketPad;  // rating points
  bool newton_polish = true;

  void check() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("EloParams: scale must be > 0");
    if (!(base > 1.0) || !std::isfinite(base)) throw std::invalid_argument("EloParams: base must be > 1");
    if (!(root_tol > 0.0)) throw std::invalid_argument("EloParams: root_tol must be > 0");
    if (!(bracket_pad > 0.0) || !std::isfinite(bracket_pad))
      throw std::invalid_argument("EloParams: bracket_pad must be > 0");
  }
};

struct ClampBounds {
  double lo = 0.0;
  double hi = 0.0;

  void check() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw std::invalid_argument("ClampBounds: need finite lo < hi");
  }
  double apply(double v) const { return std::min(std::max(v, lo), hi); }
};

/// Score-clamping stand-in for the complete performance rating at zero and
/// perfect scores: a perfect score is solved as k - delta, a zero score as
/// delta.
struct CprSurrogateParams {
  static constexpr double kDefaultDelta = 0.25;

  double delta = kDefaultDelta;

  void check() const {
    if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("CprSurrogateParams: delta must be in (0, 0.5]");
  }
};

/// 1 / (1 + base^((opp - own) / scale))
inline double expected_score(double own, double opp, const EloParams& p = {}) {
  if (!std::isfinite(own) || !std::isfinite(opp)) throw std::invalid_argument("expected_score: non-finite rating");
  return 1.0 / (1.0 + std::pow(p.base, (opp - own) / p.scale));
}

/// Total expected score of a player rated y against opp_ratings.
inline double g(double y, std::span<const double> opp_ratings, const EloParams& p = {}) {
  if (opp_ratings.empty()) throw std::invalid_argument("g: empty opponent list");
  double s = 0.0;
  for (double o : opp_ratings) s += expected_score(y, o, p);
  return s;
}

/// dg/dy, strictly positive.
inline double g_prime(double y, std::span<const double> opp_ratings, const EloParams& p = {}) {
  if (opp_ratings.empty()) throw std::invalid_argument("g_prime: empty opponent list");
  const double lnb = std::log(p.base) / p.scale;
  double s = 0.0;
  for (double o : opp_ratings) {
    const double e = std::pow(p.base, (o - y) / p.scale);
    s += lnb * e / ((1.0 + e) * (1.0 + e));
  }
  return s;
}

/// Rating y with g(y) = m, for 0 < m < k.
///
/// Bracketed bisection on the monotone g, stopping once |g(y) - m| <= root_tol,
/// then at most three safeguarded Newton steps (kept only when they shrink the
/// score error and stay inside the final bracket).
inline double solve_tpr(std::span<const double> opp_ratings, double m, const EloParams& p = {}) {
  if (opp_ratings.empty()) throw std::invalid_argument("solve_tpr: empty opponent list");
  const double k = static_cast<double>(opp_ratings.size());
  if (!(m > 0.0 && m < k)) throw std::domain_error("boundary score: use boundary extension");

  const auto [mn, mx] = std::minmax_element(opp_ratings.begin(), opp_ratings.end());
  double lo = *mn - p.bracket_pad;
  double hi = *mx + p.bracket_pad;
  double step = p.bracket_pad;
  while (g(lo, opp_ratings, p) > m) {
    step *= 2.0;
    lo -= step;
    if (!std::isfinite(lo)) throw std::runtime_error("solve_tpr: bracket expansion overflowed");
  }
  step = p.bracket_pad;
  while (g(hi, opp_ratings, p) < m) {
    step *= 2.0;
    hi += step;
    if (!std::isfinite(hi)) throw std::runtime_error("solve_tpr: bracket expansion overflowed");
  }

  double y = 0.5 * (lo + hi);
  double err = g(y, opp_ratings, p) - m;
  while (std::abs(err) > p.root_tol) {
    if (err < 0.0)
      lo = y;
    else
      hi = y;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted at double resolution
    y = mid;
    err = g(y, opp_ratings, p) - m;
  }

  if (p.newton_polish) {
    for (int i = 0; i < 3 && err != 0.0; ++i) {
      const double cand = y - err / g_prime(y, opp_ratings, p);
      if (!(cand >= lo && cand <= hi)) break;
      const double cand_err = g(cand, opp_ratings, p) - m;
      if (!(std::abs(cand_err) < std::abs(err))) break;
      y = cand;
      err = cand_err;
    }
  }
  return y;
}

/// Rating for a zero (m = 0) or perfect (m = k) score via the surrogate.
inline double solve_boundary(std::span<const double> opp_ratings, double m, const EloParams& p = {},
                             const CprSurrogateParams& c = {}) {
  if (opp_ratings.empty()) throw std::invalid_argument("solve_boundary: empty opponent list");
  const double k = static_cast<double>(opp_ratings.size());
  if (m > 0.0 && m < k) throw std::domain_error("interior score: use solve_tpr");
  if (m != 0.0 && m != k) throw std::domain_error("solve_boundary: score outside [0, k]");
  return solve_tpr(opp_ratings, m == 0.0 ? c.delta : k - c.delta, p);
}

/// Per-player detail of one TPR map evaluation.
struct TprEntry {
  double raw = 0.0;      // before clamping
  double value = 0.0;    // clamped
  bool boundary = false;  // routed through solve_boundary
  bool clamped = false;
};

/// Unclamped TPR of player i against the ratings x of its opponents.
inline TprEntry player_tpr(const Tournament& t, std::size_t i, const RatingVector& x, const EloParams& p,
                           const ClampBounds& b, const CprSurrogateParams& c) {
  const auto opp = t.opponents(i);
  std::vector<double> ratings;
  ratings.reserve(opp.size());
  for (std::size_t j : opp) ratings.push_back(x[j]);
  const PlayerTotals& tot = t.totals(i);

  TprEntry e;
  e.boundary = tot.boundary();
  e.raw = e.boundary ? solve_boundary(ratings, tot.points.value(), p, c) : solve_tpr(ratings, tot.points.value(), p);
  e.value = b.apply(e.raw);
  e.clamped = e.value != e.raw;
  return e;
}

/// Full TPR map with per-player detail.
inline std::vector<TprEntry> tpr_map_detailed(const Tournament& t, const RatingVector& x, const EloParams& p,
                                              const ClampBounds& b, const CprSurrogateParams& c) {
  if (!x.covers(t)) throw std::invalid_argument("tpr_map: rating vector does not cover the tournament");
  require_valid(t);
  std::vector<TprEntry> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = player_tpr(t, i, x, p, b, c);
  return out;
}

/// x -> [TPR_i(x)] clamped to [b.lo, b.hi] for every player.
inline RatingVector tpr_map(const Tournament& t, const RatingVector& x, const EloParams& p, const ClampBounds& b,
                            const CprSurrogateParams& c) {
  const auto entries = tpr_map_detailed(t, x, p, b, c);
  std::vector<double> v(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) v[i] = entries[i].value;
  return RatingVector(std::move(v));
}

/// Initial ratings with the default filled in; throws naming unrated players.
inline RatingVector resolved_initial_ratings(const Tournament& t) {
  std::vector<double> v(t.size());
  std::string missing;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto r = t.resolved_rating(i);
    if (!r) {
      missing += (missing.empty() ? "" : ", ") + t.player(i).id;
      continue;
    }
    v[i] = *r;
  }
  if (!missing.empty()) throw std::invalid_argument("players without a rating and no default rating: " + missing);
  return RatingVector(std::move(v));
}

/// max_i of the sum of i's opponents' initial ratings, with multiplicity.
inline double compute_c(const Tournament& t) {
  const RatingVector r = resolved_initial_ratings(t);
  double c = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double s = 0.0;
    for (std::size_t j : t.opponents(i)) s += r[j];
    c = std::max(c, s);
  }
  return c;
}

/// [0, c] for tournament t.
inline ClampBounds default_bounds(const Tournament& t) { return ClampBounds{0.0, compute_c(t)}; }

}  // namespace prerating
