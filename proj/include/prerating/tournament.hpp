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
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prerating/score.hpp"

namespace prerating {

using PlayerId = std::string;

struct Player {
  PlayerId id;
  std::string name;
  std::optional<double> rating;  // Elo points; falls back to the tournament default
};

/// One game. Player b receives 1 - score_a.
struct GameRecord {
  PlayerId a;
  PlayerId b;
  Score score_a;

  Score score_b() const { return Score::one() - score_a; }
};

struct PlayerTotals {
  int games = 0;  // k_i
  Score points;   // m_i

  bool zero() const { return points == Score{}; }
  bool perfect() const { return points == Score::points(games); }
  bool boundary() const { return zero() || perfect(); }

  friend bool operator==(const PlayerTotals&, const PlayerTotals&) = default;
};

enum class ViolationKind {
  duplicate_id,
  negative_rating,
  unknown_player,
  self_play,
  score_out_of_range,
  zero_games,
  negative_default_rating,
};

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::duplicate_id: return "duplicate player id";
    case ViolationKind::negative_rating: return "negative rating";
    case ViolationKind::unknown_player: return "unknown player";
    case ViolationKind::self_play: return "self-play";
    case ViolationKind::score_out_of_range: return "score out of range";
    case ViolationKind::zero_games: return "player with zero games";
    case ViolationKind::negative_default_rating: return "negative default rating";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::string message;
  std::optional<std::size_t> game;  // index into Tournament::games()
  std::optional<PlayerId> player;
};

/// Players, the games between them and per-player initial ratings.
///
/// Immutable after construction. The constructor indexes players and builds
/// the opponent multisets for every game whose ids resolve and are distinct;
/// anything else is left for validate() to report, so an invalid tournament
/// can still be inspected.
class Tournament {
 public:
  Tournament() = default;

  Tournament(std::vector<Player> players, std::vector<GameRecord> games,
             std::optional<double> default_rating = std::nullopt)
      : players_(std::move(players)), games_(std::move(games)), default_rating_(default_rating) {
    index_.reserve(players_.size());
    for (std::size_t i = 0; i < players_.size(); ++i) index_.emplace(players_[i].id, i);
    opponents_.resize(players_.size());
    totals_.resize(players_.size());
    for (const GameRecord& g : games_) {
      const auto a = index_of(g.a);
      const auto b = index_of(g.b);
      if (!a || !b || *a == *b) continue;
      opponents_[*a].push_back(*b);
      opponents_[*b].push_back(*a);
      totals_[*a].games += 1;
      totals_[*b].games += 1;
      totals_[*a].points += g.score_a;
      totals_[*b].points += g.score_b();
    }
  }

  std::size_t size() const { return players_.size(); }
  const std::vector<Player>& players() const { return players_; }
  const std::vector<GameRecord>& games() const { return games_; }
  std::optional<double> default_rating() const { return default_rating_; }
  const Player& player(std::size_t i) const { return players_.at(i); }

  std::optional<std::size_t> index_of(const PlayerId& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require_index(const PlayerId& id) const {
    const auto i = index_of(id);
    if (!i) throw std::out_of_range("no such player: " + id);
    return *i;
  }

  /// Opponent indices of player i, one entry per game (repeats kept).
  std::span<const std::size_t> opponents(std::size_t i) const { return opponents_.at(i); }
  const PlayerTotals& totals(std::size_t i) const { return totals_.at(i); }

  /// Own rating, else the tournament default.
  std::optional<double> resolved_rating(std::size_t i) const {
    const auto& r = players_.at(i).rating;
    return r ? r : default_rating_;
  }

 private:
  std::vector<Player> players_;
  std::vector<GameRecord> games_;
  std::optional<double> default_rating_;
  std::unordered_map<PlayerId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> opponents_;
  std::vector<PlayerTotals> totals_;
};

/// Every invariant violation in t; empty means valid.
inline std::vector<Violation> validate(const Tournament& t) {
  std::vector<Violation> out;
  std::unordered_map<PlayerId, std::size_t> seen;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Player& p = t.player(i);
    if (!seen.emplace(p.id, i).second)
      out.push_back({ViolationKind::duplicate_id, "duplicate player id '" + p.id + "'", std::nullopt, p.id});
    if (p.rating && !(*p.rating >= 0.0 && std::isfinite(*p.rating)))
      out.push_back({ViolationKind::negative_rating, "player '" + p.id + "' has an invalid rating",
                     std::nullopt, p.id});
  }
  if (t.default_rating() && !(*t.default_rating() >= 0.0 && std::isfinite(*t.default_rating())))
    out.push_back({ViolationKind::negative_default_rating, "default rating must be a finite value >= 0",
                   std::nullopt, std::nullopt});

  for (std::size_t g = 0; g < t.games().size(); ++g) {
    const GameRecord& game = t.games()[g];
    const std::string where = "game " + std::to_string(g + 1);
    for (const PlayerId* id : {&game.a, &game.b}) {
      if (!t.index_of(*id))
        out.push_back({ViolationKind::unknown_player, where + ": unknown player '" + *id + "'", g, *id});
    }
    if (game.a == game.b)
      out.push_back({ViolationKind::self_play, where + ": self-play by '" + game.a + "'", g, game.a});
    if (game.score_a < Score{} || game.score_a > Score::one())
      out.push_back({ViolationKind::score_out_of_range,
                     where + ": score " + game.score_a.to_string() + " outside [0,1]", g, std::nullopt});
  }

  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.totals(i).games == 0)
      out.push_back({ViolationKind::zero_games, "player '" + t.player(i).id + "' has zero games", std::nullopt,
                     t.player(i).id});
  }
  return out;
}

/// Thrown where a valid tournament is required.
class InvalidTournament : public std::invalid_argument {
 public:
  explicit InvalidTournament(std::vector<Violation> violations)
      : std::invalid_argument(summarize(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& v) {
    std::string s = "invalid tournament (" + std::to_string(v.size()) + " violation" + (v.size() == 1 ? "" : "s") + ")";
    for (std::size_t i = 0; i < v.size() && i < 5; ++i) s += "\n  " + v[i].message;
    if (v.size() > 5) s += "\n  ...";
    return s;
  }

  std::vector<Violation> violations_;
};

inline void require_valid(const Tournament& t) {
  auto v = validate(t);
  if (!v.empty()) throw InvalidTournament(std::move(v));
}

/// Opponents of player id, with multiplicity, in game order.
inline std::vector<PlayerId> opponents_of(const Tournament& t, const PlayerId& id) {
  const std::size_t i = t.require_index(id);
  std::vector<PlayerId> out;
  out.reserve(t.opponents(i).size());
  for (std::size_t j : t.opponents(i)) out.push_back(t.player(j).id);
  return out;
}

/// Exact (k_i, m_i) per player.
inline std::map<PlayerId, PlayerTotals> scores(const Tournament& t) {
  std::map<PlayerId, PlayerTotals> out;
  for (std::size_t i = 0; i < t.size(); ++i) out.emplace(t.player(i).id, t.totals(i));
  return out;
}

/// Ratings aligned with a tournament's player order.
class RatingVector {
 public:
  RatingVector() = default;
  explicit RatingVector(std::vector<double> values) : values_(std::move(values)) {}

  static RatingVector uniform(std::size_t n, double rating) { return RatingVector(std::vector<double>(n, rating)); }

  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool covers(const Tournament& t) const { return values_.size() == t.size(); }

  double mean() const {
    if (values_.empty()) return 0.0;
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
  }

  friend bool operator==(const RatingVector&, const RatingVector&) = default;

 private:
  std::vector<double> values_;
};

/// Rating of a player looked up by id.
inline double rating_of(const Tournament& t, const RatingVector& x, const PlayerId& id) {
  return x[t.require_index(id)];
}

/// max_i |a_i - b_i|
inline double sup_distance(const RatingVector& a, const RatingVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rating vectors differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace prerating
