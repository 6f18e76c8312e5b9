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

// prerating: performance ratings and rating equilibria for tournaments.
//
//   prerating compute  --players p.csv --games g.csv [solver flags]
//   prerating verify   --players p.csv --games g.csv --ratings r.{csv,json}
//   prerating simulate --round-robin 24 --seed 7
//   prerating explore  --players p.csv --games g.csv --uniform 2000 --uniform 2600
//
// Exit codes: 0 converged / verified, 1 input error, 2 numerical
// non-convergence (or, for verify, not an equilibrium).

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include "prerating/prerating.hpp"

namespace {

using namespace prerating;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumeric = 2;

struct SolverFlags {
  std::optional<double> default_rating;
  std::string init = "average";
  std::string start_path;
  double damping = EquilibriumConfig::kDefaultDamping;
  double sup_tol = EquilibriumConfig::kDefaultSupTol;
  int max_iters = EquilibriumConfig::kDefaultMaxIters;
  std::string scheme = "simultaneous";
  double delta = CprSurrogateParams::kDefaultDelta;
  double scale = EloParams::kDefaultScale;
  double root_tol = EloParams::kDefaultRootTol;
  std::optional<double> clamp_lo;
  std::optional<double> clamp_hi;
  unsigned threads = 1;
};

struct OutputFlags {
  std::string format = "markdown";
  std::string out;
};

void add_tournament_options(CLI::App* cmd, std::string& players, std::string& games, SolverFlags& f) {
  cmd->add_option("--players", players, "Players CSV (id,name,rating)")->required();
  cmd->add_option("--games", games, "Games CSV (a,b,score_a)")->required();
  cmd->add_option("--default-rating", f.default_rating, "Rating for players without one");
}

void add_model_options(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--delta", f.delta, "Score offset used for zero and perfect scores, in (0, 0.5]");
  cmd->add_option("--scale", f.scale, "Elo scale (rating points per factor of base in odds)");
  cmd->add_option("--root-tol", f.root_tol, "Root-finder tolerance in score units");
  cmd->add_option("--clamp-lo", f.clamp_lo, "Lower rating bound (default 0)");
  cmd->add_option("--clamp-hi", f.clamp_hi, "Upper rating bound (default: max sum of opponents' initial ratings)");
  cmd->add_option("--sup-tol", f.sup_tol, "Sup-norm tolerance in rating points");
}

void add_solver_options(CLI::App* cmd, SolverFlags& f) {
  add_model_options(cmd, f);
  cmd->add_option("--init", f.init, "Start vector: average, initial or custom")
      ->check(CLI::IsMember({"average", "initial", "custom"}));
  cmd->add_option("--start", f.start_path, "Ratings file (id,rating CSV or report JSON) for --init custom");
  cmd->add_option("--damping", f.damping, "Damping factor in (0, 1]");
  cmd->add_option("--max-iters", f.max_iters, "Iteration cap");
  cmd->add_option("--scheme", f.scheme, "Update scheme: simultaneous or sequential")
      ->check(CLI::IsMember({"simultaneous", "sequential"}));
  cmd->add_option("--threads", f.threads, "Worker threads for per-player solves");
}

void add_output_options(CLI::App* cmd, OutputFlags& o) {
  cmd->add_option("--format", o.format, "Output format: json, csv or markdown")
      ->check(CLI::IsMember({"json", "csv", "markdown", "md"}));
  cmd->add_option("--out", o.out, "Write the report here instead of standard output");
}

struct Model {
  EloParams elo;
  ClampBounds bounds;
  CprSurrogateParams cpr;
};

Model make_model(const Tournament& t, const SolverFlags& f) {
  Model m;
  m.elo.scale = f.scale;
  m.elo.root_tol = f.root_tol;
  m.cpr.delta = f.delta;
  m.bounds.lo = f.clamp_lo.value_or(0.0);
  m.bounds.hi = f.clamp_hi ? *f.clamp_hi : compute_c(t);
  m.elo.check();
  m.cpr.check();
  m.bounds.check();
  return m;
}

EquilibriumConfig make_config(const Tournament& t, const SolverFlags& f) {
  EquilibriumConfig cfg;
  cfg.init = f.init == "initial" ? InitMode::initial_ratings : f.init == "custom" ? InitMode::custom : InitMode::average;
  if (cfg.init == InitMode::custom) {
    if (f.start_path.empty()) throw std::invalid_argument("--init custom requires --start");
    cfg.custom_start = io::parse_ratings(io::read_file(f.start_path), t, f.start_path);
  }
  cfg.damping = f.damping;
  cfg.sup_tol = f.sup_tol;
  cfg.max_iters = f.max_iters;
  cfg.scheme = f.scheme == "sequential" ? UpdateScheme::sequential : UpdateScheme::simultaneous;
  cfg.threads = f.threads;
  cfg.check();
  return cfg;
}

Tournament load(const std::string& players_path, const std::string& games_path, const SolverFlags& f) {
  const auto players = io::parse_players(io::read_file(players_path), players_path);
  const auto games = io::parse_games(io::read_file(games_path), games_path);
  return io::load_tournament(players, games, f.default_rating);
}

void emit(const OutputFlags& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text;
  else
    io::write_file(o.out, text);
}

int solve_and_report(const Tournament& t, const SolverFlags& f, const OutputFlags& o) {
  const Model m = make_model(t, f);
  const EquilibriumConfig cfg = make_config(t, f);
  const EquilibriumResult result = solve_equilibrium(t, m.elo, m.bounds, m.cpr, cfg);
  const RatingVector tpr = tpr_map(t, resolved_initial_ratings(t), m.elo, m.bounds, m.cpr);
  const auto meta = io::make_meta(t, m.elo, m.bounds, m.cpr, cfg, result);
  emit(o, io::emit_report(result, tpr, t, *io::parse_format(o.format), meta));
  if (!result.converged) {
    std::cerr << "prerating: not converged (" << to_string(result.stop_reason) << ") after " << result.iterations
              << " iterations, residual " << result.residual << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_compute(const std::string& players, const std::string& games, const SolverFlags& f, const OutputFlags& o) {
  return solve_and_report(load(players, games, f), f, o);
}

int cmd_verify(const std::string& players, const std::string& games, const std::string& ratings_path,
               const SolverFlags& f, const OutputFlags& o) {
  const Tournament t = load(players, games, f);
  const RatingVector x = io::parse_ratings(io::read_file(ratings_path), t, ratings_path);
  const Model m = make_model(t, f);
  const VerificationReport rep = verify_equilibrium(t, x, m.elo, m.bounds, m.cpr);
  emit(o, io::emit_verification(rep, t, x, f.sup_tol, *io::parse_format(o.format)));
  return rep.is_equilibrium(f.sup_tol) ? kExitOk : kExitNumeric;
}

struct SimulateFlags {
  std::optional<int> round_robin;
  std::string pairing;
  int n = 0;
  int rounds = 0;
  std::uint64_t seed = 0;
  std::string rule = "elo";
  double rating_min = ScoreSource{}.rating_lo;
  double rating_max = ScoreSource{}.rating_hi;
  std::string write_players;
  std::string write_games;
};

int cmd_simulate(const SimulateFlags& s, SolverFlags f, const OutputFlags& o) {
  ScoreSource src;
  src.seed = s.seed;
  src.rule = s.rule == "draws" ? ResultRule::all_draws : s.rule == "uniform" ? ResultRule::uniform : ResultRule::elo;
  src.rating_lo = s.rating_min;
  src.rating_hi = s.rating_max;
  if (!(src.rating_lo >= 0.0 && src.rating_lo <= src.rating_hi))
    throw std::invalid_argument("need 0 <= --rating-min <= --rating-max");

  Tournament t;
  if (s.round_robin) {
    if (!s.pairing.empty()) throw std::invalid_argument("--round-robin and --pairing are mutually exclusive");
    t = generate_round_robin(*s.round_robin, src);
  } else if (s.pairing == "random") {
    t = generate_random_pairing(s.n, s.rounds, src);
  } else {
    throw std::invalid_argument("choose --round-robin N or --pairing random --n N --rounds R");
  }
  if (!s.write_players.empty()) io::write_file(s.write_players, io::emit_players_csv(io::players_file_of(t)));
  if (!s.write_games.empty()) io::write_file(s.write_games, io::emit_games_csv(io::games_file_of(t)));
  return solve_and_report(t, f, o);
}

struct ExploreFlags {
  std::vector<std::string> start_files;
  std::vector<double> uniform;
  std::vector<std::string> modes;
  std::size_t random = 0;
  std::uint64_t seed = 0;
  double spread = 400.0;
  double threshold = Exploration::kDefaultClusterThreshold;
};

int cmd_explore(const std::string& players, const std::string& games, const ExploreFlags& e, const SolverFlags& f,
                const OutputFlags& o) {
  const Tournament t = load(players, games, f);
  const Model m = make_model(t, f);
  SolverFlags base_flags = f;
  base_flags.init = "average";
  const EquilibriumConfig base = make_config(t, base_flags);

  std::vector<RatingVector> starts;
  for (const auto& mode : e.modes) {
    EquilibriumConfig c = base;
    c.init = mode == "initial" ? InitMode::initial_ratings : InitMode::average;
    starts.push_back(initial_vector(t, c));
  }
  for (double r : e.uniform) starts.push_back(RatingVector::uniform(t.size(), r));
  for (const auto& path : e.start_files) starts.push_back(io::parse_ratings(io::read_file(path), t, path));
  if (e.random > 0)
    for (auto& v : random_starts(t, e.random, e.seed, e.spread)) starts.push_back(std::move(v));
  if (starts.empty()) starts.push_back(initial_vector(t, base));

  const Exploration ex = explore_equilibria(t, m.elo, m.bounds, m.cpr, starts, base, e.threshold);
  emit(o, io::emit_exploration(ex, t, *io::parse_format(o.format), e.threshold));
  for (const auto& r : ex.results)
    if (!r.converged) return kExitNumeric;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tournament performance ratings and performance rating equilibria"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  std::string players, games, ratings;
  SolverFlags flags;
  OutputFlags out;

  auto* compute = app.add_subcommand("compute", "Solve for an equilibrium and write a report");
  add_tournament_options(compute, players, games, flags);
  add_solver_options(compute, flags);
  add_output_options(compute, out);

  auto* verify = app.add_subcommand("verify", "Check how far a rating vector is from an equilibrium");
  add_tournament_options(verify, players, games, flags);
  verify->add_option("--ratings", ratings, "Ratings to check (id,rating CSV or report JSON)")->required();
  add_model_options(verify, flags);
  add_output_options(verify, out);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic tournament, solve and report");
  simulate->add_option("--round-robin", sim.round_robin, "Single round robin with this many players");
  simulate->add_option("--pairing", sim.pairing, "Pairing scheme (random)")->check(CLI::IsMember({"random"}));
  simulate->add_option("--n", sim.n, "Players for --pairing random");
  simulate->add_option("--rounds", sim.rounds, "Rounds for --pairing random");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--rule", sim.rule, "Result rule: elo, draws or uniform")
      ->check(CLI::IsMember({"elo", "draws", "uniform"}));
  simulate->add_option("--rating-min", sim.rating_min, "Lowest synthetic rating");
  simulate->add_option("--rating-max", sim.rating_max, "Highest synthetic rating");
  simulate->add_option("--write-players", sim.write_players, "Also write the generated players CSV");
  simulate->add_option("--write-games", sim.write_games, "Also write the generated games CSV");
  add_solver_options(simulate, flags);
  add_output_options(simulate, out);

  ExploreFlags exf;
  auto* explore = app.add_subcommand("explore", "Solve from several starts and cluster the equilibria");
  add_tournament_options(explore, players, games, flags);
  explore->add_option("--start", exf.start_files, "Start vector file (repeatable)");
  explore->add_option("--uniform", exf.uniform, "Uniform start at this rating (repeatable)");
  explore->add_option("--mode", exf.modes, "Start from the average or initial vector (repeatable)")
      ->check(CLI::IsMember({"average", "initial"}));
  explore->add_option("--random", exf.random, "Number of random starts around the average");
  explore->add_option("--seed", exf.seed, "Seed for random starts");
  explore->add_option("--spread", exf.spread, "Half-width of random starts in rating points");
  explore->add_option("--threshold", exf.threshold, "Sup-distance at or below which results share a cluster");
  add_model_options(explore, flags);
  explore->add_option("--damping", flags.damping, "Damping factor in (0, 1]");
  explore->add_option("--max-iters", flags.max_iters, "Iteration cap");
  explore->add_option("--scheme", flags.scheme, "Update scheme: simultaneous or sequential")
      ->check(CLI::IsMember({"simultaneous", "sequential"}));
  explore->add_option("--threads", flags.threads, "Starts solved in parallel");
  add_output_options(explore, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*compute) return cmd_compute(players, games, flags, out);
    if (*verify) return cmd_verify(players, games, ratings, flags, out);
    if (*simulate) return cmd_simulate(sim, flags, out);
    if (*explore) return cmd_explore(players, games, exf, flags, out);
  } catch (const InvalidTournament& e) {
    std::cerr << "prerating: " << e.what() << "\n";
    return kExitInput;
  } catch (const io::ParseError& e) {
    std::cerr << "prerating: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "prerating: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
