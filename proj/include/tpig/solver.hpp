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

#ifndef TPIG_SOLVER_HPP_
#define TPIG_SOLVER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tpig/conversion.hpp"
#include "tpig/game.hpp"

namespace tpig {

// Per-infoset action distributions for one side, indexed like the side's
// InfosetPartition. Vectors are nonnegative and sum to one within 1e-12.
struct BehavioralStrategy {
  Player owner = Player::Coordinator();
  std::vector<std::vector<double>> probs;
};

// CFR+ accumulators for one side: clipped cumulative regrets and linearly
// weighted average-strategy mass.
struct RegretTable {
  std::vector<std::vector<double>> regrets;
  std::vector<std::vector<double>> avg;
  int64_t iterations = 0;
};

// Normalized cumulative weights; uniform where no mass was ever recorded.
BehavioralStrategy AverageStrategy(const RegretTable& table, Player owner);

// A two-player zero-sum view over a game: side 0 is the team side
// (coordinator or a single team seat) and maximizes the team value, side 1
// is the opponent. Construction throws NotTwoPlayerZeroSum otherwise.
struct SolveView {
  const Vefg* g = nullptr;
  Player players[2];
  const InfosetPartition* parts[2];
  // For imperfect-recall coordinator keyings: the perfect-recall partition
  // of the same tree, used when measuring exploitability.
  const InfosetPartition* lift0 = nullptr;

  static SolveView Over(const Vefg& g);
  static SolveView Over(const Tpi& tpi);
};

struct CurvePoint {
  int64_t iteration = 0;
  double wall_seconds = 0;
  double exploitability = 0;
};

struct SolveResult {
  BehavioralStrategy strategy[2];
  std::vector<CurvePoint> curve;
  double game_value = 0;  // team value of the averaged profile
  int64_t iterations_run = 0;
};

struct SolveOptions {
  int64_t iterations = 1000;
  double target_exploitability = 0;  // stop early when reached (0: never)
  int64_t eval_every = 0;            // 0: only at the end
  uint64_t seed = 1;                 // sampling algorithms only
  double exploration = 0.6;          // OS-MC-CFR epsilon-greedy mix
};

// CFR+ with alternating updates, regret-matching+ and linear averaging.
SolveResult CfrPlusSolve(const SolveView& view, const SolveOptions& opts);

// Outcome-sampling Monte Carlo CFR with epsilon-greedy exploration and
// importance weighting; bit-reproducible for a fixed seed.
SolveResult OsMcCfrSolve(const SolveView& view, const SolveOptions& opts);

}  // namespace tpig

#endif  // TPIG_SOLVER_HPP_
