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
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "prerating/equilibrium.hpp"
#include "prerating/rating_core.hpp"
#include "prerating/tournament.hpp"
#include "prerating/version.hpp"

namespace prerating::io {

struct ParseIssue {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based field index, 0 when not tied to a field
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::vector<ParseIssue> issues)
      : std::runtime_error(format(source, issues)), source_(std::move(source)), issues_(std::move(issues)) {}

  const std::string& source() const { return source_; }
  const std::vector<ParseIssue>& issues() const { return issues_; }

 private:
  static std::string format(const std::string& source, const std::vector<ParseIssue>& issues) {
    std::string s;
    for (const auto& i : issues) {
      if (!s.empty()) s += '\n';
      s += source + ":" + std::to_string(i.line);
      if (i.column) s += ":" + std::to_string(i.column);
      s += ": " + i.message;
    }
    return s;
  }

  std::string source_;
  std::vector<ParseIssue> issues_;
};

// ---------------------------------------------------------------------------
// CSV

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Splits UTF-8 text into rows. Fields may be double-quoted ("" escapes a
/// quote); quoted fields may not span lines. Blank lines are skipped and a
/// trailing CR is tolerated.
inline std::vector<CsvRow> read_csv(std::string_view text, std::vector<ParseIssue>& issues) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<CsvRow> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    CsvRow row{line_no, {}};
    std::string field;
    std::size_t i = 0;
    bool ok = true;
    for (;;) {
      field.clear();
      if (i < line.size() && line[i] == '"') {
        ++i;
        bool closed = false;
        while (i < line.size()) {
          if (line[i] == '"') {
            if (i + 1 < line.size() && line[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            closed = true;
            ++i;
            break;
          }
          field += line[i++];
        }
        if (!closed || (i < line.size() && line[i] != ',')) {
          issues.push_back({line_no, row.fields.size() + 1, "malformed quoted field"});
          ok = false;
          break;
        }
      } else {
        while (i < line.size() && line[i] != ',') field += line[i++];
        const auto b = field.find_first_not_of(" \t");
        const auto e = field.find_last_not_of(" \t");
        field = b == std::string::npos ? std::string{} : field.substr(b, e - b + 1);
      }
      row.fields.push_back(field);
      if (i >= line.size()) break;
      ++i;  // comma
      if (i == line.size()) {
        row.fields.emplace_back();
        break;
      }
    }
    if (ok) rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\n\r") == std::string_view::npos &&
      (v.empty() || (v.front() != ' ' && v.front() != '\t' && v.back() != ' ' && v.back() != '\t')))
    return std::string(v);
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

/// Shortest representation that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

namespace detail {

/// Maps required (and optional) header names to column positions.
inline std::optional<std::unordered_map<std::string, std::size_t>> read_header(
    const CsvRow& header, const std::vector<std::string>& required, const std::vector<std::string>& optional_cols,
    std::vector<ParseIssue>& issues) {
  std::unordered_map<std::string, std::size_t> cols;
  for (std::size_t c = 0; c < header.fields.size(); ++c) {
    const std::string& name = header.fields[c];
    const bool known = std::find(required.begin(), required.end(), name) != required.end() ||
                       std::find(optional_cols.begin(), optional_cols.end(), name) != optional_cols.end();
    if (!known) {
      issues.push_back({header.line, c + 1, "unexpected column '" + name + "'"});
      continue;
    }
    if (!cols.emplace(name, c).second) issues.push_back({header.line, c + 1, "duplicate column '" + name + "'"});
  }
  bool complete = true;
  for (const auto& r : required) {
    if (!cols.count(r)) {
      issues.push_back({header.line, 0, "missing column '" + r + "'"});
      complete = false;
    }
  }
  if (!complete) return std::nullopt;
  return cols;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Players and games files

struct PlayerRow {
  PlayerId id;
  std::string name;
  std::optional<double> rating;
  friend bool operator==(const PlayerRow&, const PlayerRow&) = default;
};

struct PlayersFile {
  std::vector<PlayerRow> rows;
  friend bool operator==(const PlayersFile&, const PlayersFile&) = default;
};

struct GameRow {
  PlayerId a;
  PlayerId b;
  Score score_a;
  friend bool operator==(const GameRow&, const GameRow&) = default;
};

struct GamesFile {
  std::vector<GameRow> rows;
  friend bool operator==(const GamesFile&, const GamesFile&) = default;
};

/// Header `id,name,rating`; the rating column and individual ratings may be
/// omitted.
inline PlayersFile parse_players(std::string_view text, const std::string& source = "players") {
  std::vector<ParseIssue> issues;
  const auto rows = read_csv(text, issues);
  if (rows.empty()) {
    issues.push_back({1, 0, "missing header row"});
    throw ParseError(source, std::move(issues));
  }
  const auto cols = detail::read_header(rows.front(), {"id", "name"}, {"rating"}, issues);
  PlayersFile out;
  if (cols) {
    const std::size_t width = rows.front().fields.size();
    std::unordered_map<std::string, std::size_t> first_line;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const CsvRow& row = rows[r];
      if (row.fields.size() != width) {
        issues.push_back({row.line, 0,
                          "expected " + std::to_string(width) + " fields, found " + std::to_string(row.fields.size())});
        continue;
      }
      PlayerRow p;
      p.id = row.fields[cols->at("id")];
      p.name = row.fields[cols->at("name")];
      bool ok = true;
      if (p.id.empty()) {
        issues.push_back({row.line, cols->at("id") + 1, "empty id"});
        ok = false;
      } else if (auto [it, fresh] = first_line.emplace(p.id, row.line); !fresh) {
        issues.push_back({row.line, cols->at("id") + 1,
                          "duplicate id '" + p.id + "' (first seen on line " + std::to_string(it->second) + ")"});
        ok = false;
      }
      if (auto rc = cols->find("rating"); rc != cols->end() && !row.fields[rc->second].empty()) {
        const auto v = parse_double(row.fields[rc->second]);
        if (!v || !std::isfinite(*v) || *v < 0.0) {
          issues.push_back({row.line, rc->second + 1, "rating '" + row.fields[rc->second] + "' is not a number >= 0"});
          ok = false;
        } else {
          p.rating = *v;
        }
      }
      if (ok) out.rows.push_back(std::move(p));
    }
  }
  if (!issues.empty()) throw ParseError(source, std::move(issues));
  return out;
}

/// Header `a,b,score_a`; score_a is a decimal in [0,1] from a's side.
inline GamesFile parse_games(std::string_view text, const std::string& source = "games") {
  std::vector<ParseIssue> issues;
  const auto rows = read_csv(text, issues);
  if (rows.empty()) {
    issues.push_back({1, 0, "missing header row"});
    throw ParseError(source, std::move(issues));
  }
  const auto cols = detail::read_header(rows.front(), {"a", "b", "score_a"}, {}, issues);
  GamesFile out;
  if (cols) {
    const std::size_t width = rows.front().fields.size();
    const std::size_t ca = cols->at("a"), cb = cols->at("b"), cs = cols->at("score_a");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const CsvRow& row = rows[r];
      if (row.fields.size() != width) {
        issues.push_back({row.line, 0,
                          "expected " + std::to_string(width) + " fields, found " + std::to_string(row.fields.size())});
        continue;
      }
      GameRow gr{row.fields[ca], row.fields[cb], {}};
      bool ok = true;
      if (gr.a.empty()) issues.push_back({row.line, ca + 1, "empty player id"}), ok = false;
      if (gr.b.empty()) issues.push_back({row.line, cb + 1, "empty player id"}), ok = false;
      if (ok && gr.a == gr.b) issues.push_back({row.line, cb + 1, "self-play: '" + gr.a + "' against itself"}), ok = false;
      const auto s = Score::parse(row.fields[cs]);
      if (!s) {
        issues.push_back({row.line, cs + 1, "score '" + row.fields[cs] + "' is not a decimal"});
        ok = false;
      } else if (*s < Score{} || *s > Score::one()) {
        issues.push_back({row.line, cs + 1, "score " + row.fields[cs] + " outside [0,1]"});
        ok = false;
      } else {
        gr.score_a = *s;
      }
      if (ok) out.rows.push_back(std::move(gr));
    }
  }
  if (!issues.empty()) throw ParseError(source, std::move(issues));
  return out;
}

inline std::string emit_players_csv(const PlayersFile& f) {
  std::string out = "id,name,rating\n";
  for (const auto& p : f.rows)
    out += csv_field(p.id) + "," + csv_field(p.name) + "," + (p.rating ? format_double(*p.rating) : "") + "\n";
  return out;
}

inline std::string emit_games_csv(const GamesFile& f) {
  std::string out = "a,b,score_a\n";
  for (const auto& g : f.rows) out += csv_field(g.a) + "," + csv_field(g.b) + "," + g.score_a.to_string() + "\n";
  return out;
}

/// Validated tournament; throws InvalidTournament with every violation.
inline Tournament load_tournament(const PlayersFile& players, const GamesFile& games,
                                  std::optional<double> default_rating) {
  std::vector<Player> ps;
  ps.reserve(players.rows.size());
  for (const auto& r : players.rows) ps.push_back({r.id, r.name, r.rating});
  std::vector<GameRecord> gs;
  gs.reserve(games.rows.size());
  for (const auto& r : games.rows) gs.push_back({r.a, r.b, r.score_a});
  Tournament t(std::move(ps), std::move(gs), default_rating);
  require_valid(t);
  return t;
}

inline PlayersFile players_file_of(const Tournament& t) {
  PlayersFile f;
  for (const auto& p : t.players()) f.rows.push_back({p.id, p.name, p.rating});
  return f;
}

inline GamesFile games_file_of(const Tournament& t) {
  GamesFile f;
  for (const auto& g : t.games()) f.rows.push_back({g.a, g.b, g.score_a});
  return f;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

// ---------------------------------------------------------------------------
// Rating vectors on disk

/// Either a CSV with header `id,rating` or a report JSON (rows[].id and
/// rows[].ppr). Every tournament player must be present exactly once and no
/// other ids may appear.
inline RatingVector parse_ratings(std::string_view text, const Tournament& t, const std::string& source = "ratings") {
  std::vector<ParseIssue> issues;
  std::vector<std::pair<std::size_t, std::pair<std::string, double>>> entries;  // line, (id, value)

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, {{1, 0, std::string("invalid JSON: ") + e.what()}});
    }
    if (!j.contains("rows") || !j["rows"].is_array()) throw ParseError(source, {{1, 0, "report JSON has no rows array"}});
    std::size_t idx = 0;
    for (const auto& row : j["rows"]) {
      ++idx;
      if (!row.contains("id") || !row["id"].is_string() || !row.contains("ppr") || !row["ppr"].is_number()) {
        issues.push_back({idx, 0, "row " + std::to_string(idx) + " lacks string id or numeric ppr"});
        continue;
      }
      entries.push_back({idx, {row["id"].get<std::string>(), row["ppr"].get<double>()}});
    }
  } else {
    const auto rows = read_csv(text, issues);
    if (rows.empty()) throw ParseError(source, {{1, 0, "missing header row"}});
    const auto cols = detail::read_header(rows.front(), {"id", "rating"}, {}, issues);
    if (cols) {
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        if (row.fields.size() != rows.front().fields.size()) {
          issues.push_back({row.line, 0, "wrong number of fields"});
          continue;
        }
        const auto v = parse_double(row.fields[cols->at("rating")]);
        if (!v || !std::isfinite(*v)) {
          issues.push_back({row.line, cols->at("rating") + 1, "rating is not a number"});
          continue;
        }
        entries.push_back({row.line, {row.fields[cols->at("id")], *v}});
      }
    }
  }

  std::vector<double> values(t.size(), 0.0);
  std::vector<bool> seen(t.size(), false);
  for (const auto& [line, e] : entries) {
    const auto i = t.index_of(e.first);
    if (!i) {
      issues.push_back({line, 0, "unknown player '" + e.first + "'"});
      continue;
    }
    if (seen[*i]) {
      issues.push_back({line, 0, "duplicate rating for '" + e.first + "'"});
      continue;
    }
    seen[*i] = true;
    values[*i] = e.second;
  }
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!seen[i]) issues.push_back({0, 0, "no rating for player '" + t.player(i).id + "'"});
  if (!issues.empty()) throw ParseError(source, std::move(issues));
  return RatingVector(std::move(values));
}

inline std::string emit_ratings_csv(const Tournament& t, const RatingVector& x) {
  std::string out = "id,rating\n";
  for (std::size_t i = 0; i < t.size(); ++i) out += csv_field(t.player(i).id) + "," + format_double(x[i]) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { json, csv, markdown };

inline std::optional<ReportFormat> parse_format(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  return std::nullopt;
}

/// Nearest integer, halves away from zero.
inline long long display_round(double v) { return std::llround(v); }

/// Run settings echoed into every report.
struct ReportMeta {
  std::string init_mode = "average";
  double average_rating = 0.0;  // mean of the start vector
  double c = 0.0;
  ClampBounds bounds;
  EloParams elo;
  CprSurrogateParams cpr;
  double damping = EquilibriumConfig::kDefaultDamping;
  double sup_tol = EquilibriumConfig::kDefaultSupTol;
  int max_iters = EquilibriumConfig::kDefaultMaxIters;
  std::string update_scheme = "simultaneous";
};

inline ReportMeta make_meta(const Tournament& t, const EloParams& p, const ClampBounds& b,
                            const CprSurrogateParams& c, const EquilibriumConfig& cfg, const EquilibriumResult& r) {
  ReportMeta m;
  m.init_mode = to_string(cfg.init);
  m.average_rating = r.start.mean();
  m.c = compute_c(t);
  m.bounds = b;
  m.elo = p;
  m.cpr = c;
  m.damping = cfg.damping;
  m.sup_tol = cfg.sup_tol;
  m.max_iters = cfg.max_iters;
  m.update_scheme = to_string(cfg.scheme);
  return m;
}

struct ReportRow {
  std::size_t rank = 0;
  PlayerId id;
  std::string name;
  std::optional<double> rating;
  int games = 0;
  Score points;
  double tpr = 0.0;
  double ppr = 0.0;
  double prediction_error = 0.0;
  bool boundary = false;
  bool clamped = false;
};

struct ResultReport {
  ReportMeta meta;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::string stop_reason;
  double max_prediction_error = 0.0;
  std::vector<PlayerId> clamped_low;
  std::vector<PlayerId> clamped_high;
  std::vector<ReportRow> rows;  // points desc, PPR desc, id asc
};

inline ResultReport build_report(const EquilibriumResult& result, const RatingVector& tpr_baseline, const Tournament& t,
                                 const ReportMeta& meta) {
  if (!result.ratings.covers(t) || !tpr_baseline.covers(t))
    throw std::invalid_argument("report: rating vectors do not cover the tournament");
  const VerificationReport check = verify_equilibrium(t, result.ratings, meta.elo, meta.bounds, meta.cpr);

  ResultReport rep;
  rep.meta = meta;
  rep.iterations = result.iterations;
  rep.residual = result.residual;
  rep.converged = result.converged;
  rep.stop_reason = to_string(result.stop_reason);
  rep.max_prediction_error = check.max_interior_error;
  for (std::size_t i : result.clamped_low) rep.clamped_low.push_back(t.player(i).id);
  for (std::size_t i : result.clamped_high) rep.clamped_high.push_back(t.player(i).id);

  for (std::size_t i = 0; i < t.size(); ++i) {
    ReportRow row;
    row.id = t.player(i).id;
    row.name = t.player(i).name;
    row.rating = t.player(i).rating;
    row.games = t.totals(i).games;
    row.points = t.totals(i).points;
    row.tpr = tpr_baseline[i];
    row.ppr = result.ratings[i];
    row.prediction_error = check.players[i].prediction_error;
    row.boundary = check.players[i].boundary;
    row.clamped = check.players[i].clamped;
    rep.rows.push_back(std::move(row));
  }
  std::sort(rep.rows.begin(), rep.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.points != b.points) return a.points > b.points;
    if (a.ppr != b.ppr) return a.ppr > b.ppr;
    return a.id < b.id;
  });
  for (std::size_t r = 0; r < rep.rows.size(); ++r) rep.rows[r].rank = r + 1;
  return rep;
}

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string md_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace detail

inline nlohmann::json to_json(const ResultReport& rep) {
  using nlohmann::json;
  json meta = {
      {"tool", "prerating"},
      {"tool_version", kVersion},
      {"init_mode", rep.meta.init_mode},
      {"average_rating", rep.meta.average_rating},
      {"c", rep.meta.c},
      {"clamp_lo", rep.meta.bounds.lo},
      {"clamp_hi", rep.meta.bounds.hi},
      {"scale", rep.meta.elo.scale},
      {"base", rep.meta.elo.base},
      {"root_tol", rep.meta.elo.root_tol},
      {"delta", rep.meta.cpr.delta},
      {"damping", rep.meta.damping},
      {"sup_tol", rep.meta.sup_tol},
      {"max_iters", rep.meta.max_iters},
      {"update_scheme", rep.meta.update_scheme},
      {"iterations", rep.iterations},
      {"residual", rep.residual},
      {"converged", rep.converged},
      {"stop_reason", rep.stop_reason},
      {"max_prediction_error", rep.max_prediction_error},
      {"clamped_low", rep.clamped_low},
      {"clamped_high", rep.clamped_high},
  };
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({
        {"rank", r.rank},
        {"id", r.id},
        {"name", r.name},
        {"rating", r.rating ? json(*r.rating) : json(nullptr)},
        {"games", r.games},
        {"points", r.points.value()},
        {"tpr", r.tpr},
        {"ppr", r.ppr},
        {"prediction_error", r.prediction_error},
        {"boundary", r.boundary},
        {"clamped", r.clamped},
    });
  }
  return json{{"meta", std::move(meta)}, {"rows", std::move(rows)}};
}

inline std::string emit_report(const ResultReport& rep, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return to_json(rep).dump(2) + "\n";
    case ReportFormat::csv: {
      std::string out = "rank,id,name,rating,games,points,tpr,ppr,prediction_error\n";
      for (const auto& r : rep.rows) {
        out += std::to_string(r.rank) + "," + csv_field(r.id) + "," + csv_field(r.name) + "," +
               (r.rating ? std::to_string(display_round(*r.rating)) : "") + "," + std::to_string(r.games) + "," +
               r.points.to_string() + "," + std::to_string(display_round(r.tpr)) + "," +
               std::to_string(display_round(r.ppr)) + "," + detail::sci(r.prediction_error) + "\n";
      }
      return out;
    }
    case ReportFormat::markdown: {
      std::string out = "| Rank | Name | Rtg | Games | Pts | TPR | PPR |\n|---:|:---|---:|---:|---:|---:|---:|\n";
      for (const auto& r : rep.rows) {
        out += "| " + std::to_string(r.rank) + " | " + detail::md_escape(r.name.empty() ? r.id : r.name) + " | " +
               (r.rating ? std::to_string(display_round(*r.rating)) : "") + " | " + std::to_string(r.games) + " | " +
               r.points.to_string() + " | " + std::to_string(display_round(r.tpr)) + " | " +
               std::to_string(display_round(r.ppr)) + " |\n";
      }
      char buf[256];
      std::snprintf(buf, sizeof buf, "\ninit=%s average=%.2f c=%.2f iterations=%d residual=%s converged=%s\n",
                    rep.meta.init_mode.c_str(), rep.meta.average_rating, rep.meta.c, rep.iterations,
                    detail::sci(rep.residual).c_str(), rep.converged ? "true" : "false");
      out += buf;
      if (!rep.clamped_low.empty() || !rep.clamped_high.empty()) {
        out += "clamped:";
        for (const auto& id : rep.clamped_low) out += " " + id + "(lo)";
        for (const auto& id : rep.clamped_high) out += " " + id + "(hi)";
        out += "\n";
      }
      return out;
    }
  }
  return {};
}

inline std::string emit_report(const EquilibriumResult& result, const RatingVector& tpr_baseline, const Tournament& t,
                               ReportFormat format, const ReportMeta& meta) {
  return emit_report(build_report(result, tpr_baseline, t, meta), format);
}

/// Per-player prediction errors for an arbitrary rating vector.
inline std::string emit_verification(const VerificationReport& v, const Tournament& t, const RatingVector& x,
                                     double sup_tol, ReportFormat format) {
  const bool ok = v.is_equilibrium(sup_tol);
  switch (format) {
    case ReportFormat::json: {
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& pc = v.players[i];
        rows.push_back({{"id", t.player(i).id},
                        {"name", t.player(i).name},
                        {"rating", x[i]},
                        {"points", t.totals(i).points.value()},
                        {"expected", pc.expected},
                        {"prediction_error", pc.prediction_error},
                        {"tpr", pc.tpr},
                        {"boundary", pc.boundary},
                        {"clamped", pc.clamped}});
      }
      nlohmann::json j = {{"meta",
                           {{"tool_version", kVersion},
                            {"residual", v.residual},
                            {"max_prediction_error", v.max_interior_error},
                            {"sup_tol", sup_tol},
                            {"equilibrium", ok}}},
                          {"rows", std::move(rows)}};
      return j.dump(2) + "\n";
    }
    case ReportFormat::csv: {
      std::string out = "id,name,rating,points,expected,prediction_error,tpr\n";
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& pc = v.players[i];
        out += csv_field(t.player(i).id) + "," + csv_field(t.player(i).name) + "," + format_double(x[i]) + "," +
               t.totals(i).points.to_string() + "," + format_double(pc.expected) + "," +
               detail::sci(pc.prediction_error) + "," + format_double(pc.tpr) + "\n";
      }
      return out;
    }
    case ReportFormat::markdown: {
      std::string out = "| Name | Rating | Pts | Expected | Error | TPR |\n|:---|---:|---:|---:|---:|---:|\n";
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& pc = v.players[i];
        char buf[160];
        std::snprintf(buf, sizeof buf, " | %.2f | %s | %.4f | %s | %.2f |\n", x[i], t.totals(i).points.to_string().c_str(),
                      pc.expected, detail::sci(pc.prediction_error).c_str(), pc.tpr);
        out += "| " + detail::md_escape(t.player(i).name.empty() ? t.player(i).id : t.player(i).name) + buf;
      }
      out += "\nresidual=" + detail::sci(v.residual) + " max_prediction_error=" + detail::sci(v.max_interior_error) +
             " equilibrium=" + (ok ? "true" : "false") + "\n";
      return out;
    }
  }
  return {};
}

/// Multi-start summary: per-run outcome, cluster labels, sup-distance matrix.
inline std::string emit_exploration(const Exploration& ex, const Tournament& t, ReportFormat format,
                                    double threshold = Exploration::kDefaultClusterThreshold) {
  switch (format) {
    case ReportFormat::json: {
      nlohmann::json runs = nlohmann::json::array();
      for (std::size_t s = 0; s < ex.results.size(); ++s) {
        const auto& r = ex.results[s];
        nlohmann::json ratings = nlohmann::json::object();
        nlohmann::json start = nlohmann::json::object();
        for (std::size_t i = 0; i < t.size(); ++i) {
          ratings[t.player(i).id] = r.ratings[i];
          start[t.player(i).id] = r.start[i];
        }
        runs.push_back({{"start", s},
                        {"cluster", ex.cluster_of[s]},
                        {"iterations", r.iterations},
                        {"converged", r.converged},
                        {"residual", r.residual},
                        {"start_ratings", std::move(start)},
                        {"ratings", std::move(ratings)}});
      }
      nlohmann::json j = {{"meta",
                           {{"tool_version", kVersion},
                            {"starts", ex.results.size()},
                            {"clusters", ex.cluster_count},
                            {"cluster_threshold", threshold}}},
                          {"runs", std::move(runs)},
                          {"distances", ex.distances}};
      return j.dump(2) + "\n";
    }
    case ReportFormat::csv: {
      std::string out = "start,cluster,iterations,converged,residual";
      for (std::size_t s = 0; s < ex.results.size(); ++s) out += ",d" + std::to_string(s);
      out += "\n";
      for (std::size_t s = 0; s < ex.results.size(); ++s) {
        const auto& r = ex.results[s];
        out += std::to_string(s) + "," + std::to_string(ex.cluster_of[s]) + "," + std::to_string(r.iterations) + "," +
               (r.converged ? "true" : "false") + "," + detail::sci(r.residual);
        for (double d : ex.distances[s]) out += "," + format_double(d);
        out += "\n";
      }
      return out;
    }
    case ReportFormat::markdown: {
      std::string out = "| Start | Cluster | Iterations | Converged | Residual | Mean PPR |\n|---:|---:|---:|:---|---:|---:|\n";
      for (std::size_t s = 0; s < ex.results.size(); ++s) {
        const auto& r = ex.results[s];
        char buf[200];
        std::snprintf(buf, sizeof buf, "| %zu | %zu | %d | %s | %s | %.2f |\n", s, ex.cluster_of[s], r.iterations,
                      r.converged ? "yes" : "no", detail::sci(r.residual).c_str(), r.ratings.mean());
        out += buf;
      }
      out += "\nPairwise sup-distance:\n\n|   |";
      for (std::size_t s = 0; s < ex.results.size(); ++s) out += " " + std::to_string(s) + " |";
      out += "\n|---|";
      for (std::size_t s = 0; s < ex.results.size(); ++s) out += "---:|";
      out += "\n";
      for (std::size_t s = 0; s < ex.results.size(); ++s) {
        out += "| " + std::to_string(s) + " |";
        for (double d : ex.distances[s]) {
          char buf[32];
          std::snprintf(buf, sizeof buf, " %.2f |", d);
          out += buf;
        }
        out += "\n";
      }
      out += "\nclusters=" + std::to_string(ex.cluster_count) + "\n";
      return out;
    }
  }
  return {};
}

}  // namespace prerating::io
