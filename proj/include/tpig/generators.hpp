// Copyright 2026 the tpig authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TPIG_GENERATORS_HPP_
#define TPIG_GENERATORS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpig/game.hpp"

namespace tpig {

// Parameters of the mnKr / mnLbrc poker families. Seats are numbered
// 0..m+n-1; by default the adversary takes the last seat.
struct PokerParams {
  int team_size = 2;        // m
  int adversary_count = 1;  // n, fixed to 1
  int ranks = 3;            // r
  bool leduc = false;
  int max_bets = 1;         // b, raises allowed per betting round (Leduc)
  int suits = 3;            // c, copies of each rank in the deck (Leduc)
  int adversary_seat = -1;  // -1: last seat

  int num_players() const { return team_size + adversary_count; }
  int resolved_adversary_seat() const {
    return adversary_seat < 0 ? num_players() - 1 : adversary_seat;
  }
  std::string name() const;
};

// Parses instance names like "21K3" or "21L133". Returns nullopt when the
// string does not follow the mnKr / mnLbrc grammar.
std::optional<PokerParams> ParseInstanceName(const std::string& name);

Vefg GenKuhn(const PokerParams& params);
Vefg GenLeduc(const PokerParams& params);

// Reproducible random games for the property suites. Every returned game
// passes Validate (the generator resamples internally until it does).
Vefg GenRandomVefg(uint64_t seed, int node_budget, int num_players);

struct NamedGame {
  std::string name;
  Vefg game;
};

// Hand-coded small instances: the two-player cooperative signaling game with
// chance, and an adversarial variant whose team decision nodes share one
// public state.
std::vector<NamedGame> BuiltinExamples();

// Dispatches on the name: instance names go to the poker generators,
// otherwise the builtin example with that name is returned.
Vefg GenerateByName(const std::string& name, int adversary_seat = -1);

}  // namespace tpig

#endif  // TPIG_GENERATORS_HPP_
