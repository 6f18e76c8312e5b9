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

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "prerating/generators.hpp"
#include "prerating/io.hpp"

namespace prerating::fixture {

/// One published row of a golden fixture.
struct ExpectedRow {
  PlayerId id;
  std::string name;
  std::optional<double> rating;
  Score points;
  std::optional<long long> tpr;
  std::optional<long long> ppr;
};

struct Manifest {
  std::filesystem::path dir;
  std::string name;
  std::string format;  // "round-robin" or "swiss"
  std::size_t player_count = 0;
  std::size_t game_count = 0;
  std::optional<double> default_rating;
  std::vector<std::pair<PlayerId, PlayerId>> unplayed;
  std::vector<ExpectedRow> rows;
  std::vector<std::pair<PlayerId, std::string>> excluded;  // id, reason

  bool is_excluded(const PlayerId& id) const {
    for (const auto& e : excluded)
      if (e.first == id) return true;
    return false;
  }
  std::filesystem::path players_csv() const { return dir / "players.csv"; }
  std::filesystem::path games_csv() const { return dir / "games.csv"; }
  bool has_games() const { return std::filesystem::exists(games_csv()); }
};

inline Manifest load_manifest(const std::filesystem::path& dir) {
  const auto j = nlohmann::json::parse(io::read_file((dir / "manifest.json").string()));
  Manifest m;
  m.dir = dir;
  m.name = j.at("name").get<std::string>();
  m.format = j.at("format").get<std::string>();
  m.player_count = j.at("player_count").get<std::size_t>();
  m.game_count = j.at("game_count").get<std::size_t>();
  if (j.contains("default_rating")) m.default_rating = j["default_rating"].get<double>();
  if (j.contains("unplayed"))
    for (const auto& u : j["unplayed"]) m.unplayed.emplace_back(u.at(0).get<std::string>(), u.at(1).get<std::string>());
  for (const auto& r : j.at("rows")) {
    ExpectedRow row;
    row.id = r.at("id").get<std::string>();
    row.name = r.at("name").get<std::string>();
    if (r.contains("rating")) row.rating = r["rating"].get<double>();
    row.points = Score::from_double(r.at("points").get<double>());
    if (r.contains("tpr")) row.tpr = r["tpr"].get<long long>();
    if (r.contains("ppr")) row.ppr = r["ppr"].get<long long>();
    m.rows.push_back(std::move(row));
  }
  if (j.contains("excluded_rows"))
    for (const auto& e : j["excluded_rows"])
      m.excluded.emplace_back(e.at("id").get<std::string>(), e.at("reason").get<std::string>());
  return m;
}

/// Round robin realizing the manifest's points exactly (results in {0, 1/2, 1}).
inline Tournament synthesize_round_robin(const Manifest& m) {
  std::vector<Player> players;
  std::vector<Score> targets;
  for (const auto& r : m.rows) {
    players.push_back({r.id, r.name, r.rating});
    targets.push_back(r.points);
  }
  std::vector<std::pair<std::size_t, std::size_t>> unplayed;
  auto index = [&](const PlayerId& id) {
    for (std::size_t i = 0; i < m.rows.size(); ++i)
      if (m.rows[i].id == id) return i;
    throw std::invalid_argument("manifest: unplayed pair names unknown player '" + id + "'");
  };
  for (const auto& [a, b] : m.unplayed) unplayed.emplace_back(index(a), index(b));
  return realize_round_robin(std::move(players), targets, unplayed, m.default_rating);
}

/// Tournament from the fixture's CSV files.
inline Tournament load_files(const Manifest& m) {
  const auto players = io::parse_players(io::read_file(m.players_csv().string()), m.players_csv().string());
  const auto games = io::parse_games(io::read_file(m.games_csv().string()), m.games_csv().string());
  return io::load_tournament(players, games, m.default_rating);
}

}  // namespace prerating::fixture
