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

// Writes players.csv and games.csv for a round-robin fixture whose manifest
// only lists final points.
//
//   make_fixture fixtures/interzonal1970

#include <iostream>

#include "prerating/fixture.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixture <fixture-dir>\n";
    return 1;
  }
  try {
    const auto m = prerating::fixture::load_manifest(argv[1]);
    if (m.format != "round-robin") {
      std::cerr << "make_fixture: only round-robin fixtures can be synthesized\n";
      return 1;
    }
    const auto t = prerating::fixture::synthesize_round_robin(m);
    prerating::require_valid(t);
    namespace io = prerating::io;
    io::write_file(m.players_csv().string(), io::emit_players_csv(io::players_file_of(t)));
    io::write_file(m.games_csv().string(), io::emit_games_csv(io::games_file_of(t)));
    std::cout << "wrote " << t.size() << " players, " << t.games().size() << " games to " << argv[1] << "\n";
  } catch (const std::exception& e) {
    std::cerr << "make_fixture: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
