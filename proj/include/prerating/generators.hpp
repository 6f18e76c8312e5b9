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
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prerating/rating_core.hpp"
#include "prerating/tournament.hpp"

namespace prerating {

enum class ResultRule {
  all_draws,
  elo,      // win/draw/loss sampled so the expected score matches the Elo curve
  uniform,  // win, draw and loss equally likely
};

inline const char* to_string(ResultRule r) {
  switch (r) {
    case ResultRule::all_draws: return "draws";
    case ResultRule::elo: return "elo";
    case ResultRule::uniform: return "uniform";
  }
  return "?";
}

/// Where synthetic ratings and results come from.
struct ScoreSource {
  std::uint64_t seed = 0;
  ResultRule rule = ResultRule::elo;
  double rating_lo = 2200.0;
  double rating_hi = 2800.0;
  double draw_share = 0.35;  // upper bound on P(draw) for the elo rule
};

namespace detail {

inline std::vector<Player> synthetic_players(int n, std::mt19937_64& rng, const ScoreSource& src) {
  const int width = static_cast<int>(std::to_string(n).size());
  std::uniform_real_distribution<double> rating(src.rating_lo, src.rating_hi);
  std::vector<Player> players;
  players.reserve(n);
  for (int i = 1; i <= n; ++i) {
    std::string num = std::to_string(i);
    num.insert(0, width - num.size(), '0');
    // Whole-point ratings keep CSV round trips exact.
    players.push_back({"p" + num, "Player " + num, std::round(rating(rng))});
  }
  return players;
}

inline Score draw_result(double ra, double rb, std::mt19937_64& rng, const ScoreSource& src) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (src.rule) {
    case ResultRule::all_draws:
      return Score::half();
    case ResultRule::uniform: {
      const double v = u(rng);
      return v < 1.0 / 3 ? Score::one() : v < 2.0 / 3 ? Score::half() : Score{};
    }
    case ResultRule::elo: {
      const double e = expected_score(ra, rb);
      const double pd = std::min(src.draw_share, 2.0 * std::min(e, 1.0 - e));
      const double v = u(rng);
      const double win = e - pd / 2;
      return v < win ? Score::one() : v < win + pd ? Score::half() : Score{};
    }
  }
  return Score::half();
}

}  // namespace detail

/// Single round robin: every unordered pair meets once.
inline Tournament generate_round_robin(int n, const ScoreSource& src = {}) {
  if (n < 2) throw std::invalid_argument("round robin needs at least 2 players");
  std::mt19937_64 rng(src.seed);
  auto players = detail::synthetic_players(n, rng, src);
  std::vector<GameRecord> games;
  games.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      games.push_back({players[i].id, players[j].id,
                       detail::draw_result(*players[i].rating, *players[j].rating, rng, src)});
  return Tournament(std::move(players), std::move(games));
}

/// Random pairings: each round is a uniformly shuffled perfect matching; with
/// odd n the last player of the shuffle sits out. Opponents may repeat.
inline Tournament generate_random_pairing(int n, int rounds, const ScoreSource& src = {}) {
  if (n < 2) throw std::invalid_argument("random pairing needs at least 2 players");
  if (rounds < 1) throw std::invalid_argument("random pairing needs at least 1 round");
  std::mt19937_64 rng(src.seed);
  auto players = detail::synthetic_players(n, rng, src);
  std::vector<std::size_t> order(n);
  std::vector<GameRecord> games;
  for (int r = 0; r < rounds; ++r) {
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i + 1 < n; i += 2) {
      const Player& a = players[order[i]];
      const Player& b = players[order[i + 1]];
      games.push_back({a.id, b.id, detail::draw_result(*a.rating, *b.rating, rng, src)});
    }
  }
  Tournament t(std::move(players), std::move(games));
  // An odd field with one round leaves the bye player without games.
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.totals(i).games == 0)
      throw std::invalid_argument("random pairing left player without games; use more rounds or even n");
  return t;
}

/// Builds a round robin (minus the listed unplayed pairs) whose per-player
/// totals equal `targets` exactly, using results in {0, 1/2, 1}.
///
/// Each game owns two half-points; a max-flow from games to players with
/// player capacity 2 * target assigns them. Integral flows give valid
/// results. Throws when the totals are not realizable.
inline Tournament realize_round_robin(std::vector<Player> players, const std::vector<Score>& targets,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& unplayed = {},
                                      std::optional<double> default_rating = std::nullopt) {
  const std::size_t n = players.size();
  if (targets.size() != n) throw std::invalid_argument("realize: one target per player");
  for (Score s : targets)
    if (!s.is_half_multiple() || s < Score{}) throw std::invalid_argument("realize: targets must be non-negative half points");

  std::set<std::pair<std::size_t, std::size_t>> skip;
  for (auto [a, b] : unplayed) skip.emplace(std::min(a, b), std::max(a, b));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!skip.count({i, j})) pairs.emplace_back(i, j);

  // Nodes: source, games, players, sink.
  const std::size_t source = 0, first_game = 1, first_player = first_game + pairs.size();
  const std::size_t sink = first_player + n, nodes = sink + 1;
  struct Edge {
    std::size_t to;
    int cap;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> adj(nodes);
  auto add = [&](std::size_t u, std::size_t v, int cap) {
    adj[u].push_back(edges.size());
    edges.push_back({v, cap});
    adj[v].push_back(edges.size());
    edges.push_back({u, 0});
  };
  for (std::size_t gi = 0; gi < pairs.size(); ++gi) {
    add(source, first_game + gi, 2);
    add(first_game + gi, first_player + pairs[gi].first, 2);
    add(first_game + gi, first_player + pairs[gi].second, 2);
  }
  long long demand = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto halves = targets[i].units() / (Score::kUnitsPerPoint / 2);
    demand += halves;
    add(first_player + i, sink, static_cast<int>(halves));
  }
  const long long supply = 2 * static_cast<long long>(pairs.size());
  if (demand != supply) throw std::invalid_argument("realize: targets sum to " + Score::from_units(demand * (Score::kUnitsPerPoint / 2)).to_string() +
                                                    " points but there are " + std::to_string(pairs.size()) + " games");

  // Edmonds-Karp.
  long long flow = 0;
  for (;;) {
    std::vector<std::size_t> via(nodes, std::numeric_limits<std::size_t>::max());
    std::queue<std::size_t> q;
    q.push(source);
    while (!q.empty() && via[sink] == std::numeric_limits<std::size_t>::max()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t e : adj[u]) {
        const std::size_t v = edges[e].to;
        if (edges[e].cap > 0 && v != source && via[v] == std::numeric_limits<std::size_t>::max()) {
          via[v] = e;
          q.push(v);
        }
      }
    }
    if (via[sink] == std::numeric_limits<std::size_t>::max()) break;
    int push = std::numeric_limits<int>::max();
    for (std::size_t v = sink; v != source; v = edges[via[v] ^ 1].to) push = std::min(push, edges[via[v]].cap);
    for (std::size_t v = sink; v != source; v = edges[via[v] ^ 1].to) {
      edges[via[v]].cap -= push;
      edges[via[v] ^ 1].cap += push;
    }
    flow += push;
  }
  if (flow != supply) throw std::invalid_argument("realize: score vector is not realizable");

  std::vector<GameRecord> games;
  games.reserve(pairs.size());
  for (std::size_t gi = 0; gi < pairs.size(); ++gi) {
    // Residual capacity on the game -> first player edge is 2 minus the flow it carries.
    const std::size_t edge_to_a = adj[first_game + gi][1];
    const int halves_a = 2 - edges[edge_to_a].cap;
    games.push_back({players[pairs[gi].first].id, players[pairs[gi].second].id,
                     Score::from_units(halves_a * (Score::kUnitsPerPoint / 2))});
  }
  return Tournament(std::move(players), std::move(games), default_rating);
}

}  // namespace prerating
