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

#ifndef TPIG_TRANSFORM_HPP_
#define TPIG_TRANSFORM_HPP_

#include "tpig/game.hpp"

namespace tpig {

// Every team member observes every team member's actions (ex-ante strategy
// sharing). The tree is untouched; only the visibility table changes.
Vefg InflateTeam(const Vefg& g);

// Rebuilds the game so that levels follow a fixed round-robin player order
// (team seats, opponent, then chance), inserting single-action dummy nodes
// where the scheduled player has nothing to do. The output satisfies
// CheckPublicTurnTaking and has at most (|N|+1)*|H|^2 nodes; the reduced
// normal form of every player is preserved.
Vefg MakePublicTurnTaking(const Vefg& g);

// True iff every opponent and chance action is pub or hidden for the team,
// never priv.
bool CheckCommonExternalInformation(const Vefg& g);

}  // namespace tpig

#endif  // TPIG_TRANSFORM_HPP_
