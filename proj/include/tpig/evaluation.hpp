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

#ifndef TPIG_EVALUATION_HPP_
#define TPIG_EVALUATION_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "tpig/conversion.hpp"
#include "tpig/game.hpp"
#include "tpig/solver.hpp"

namespace tpig {

// Size statistics in the benchmark-table sense. `actions` sums |A(I)| over
// the side's infosets; `sequences` additionally counts the empty sequence.
struct TreeStats {
  int64_t nodes = 0;
  int64_t terminals = 0;
  int64_t team_infosets = 0;
  int64_t adv_infosets = 0;
  int64_t team_actions = 0;
  int64_t adv_actions = 0;
  int64_t team_sequences = 0;
  int64_t adv_sequences = 0;
};

// `include_dummy` also counts turn-taking filler nodes; filler actions are
// never part of the action tallies.
TreeStats TreeStatsOf(const Vefg& g, bool include_dummy = false);
TreeStats TreeStatsOf(const Tpi& tpi, bool include_dummy = false);

// One reduced pure strategy per team seat: an action pick per infoset, -1 at
// infosets unreachable under the plan's own earlier choices.
struct JointPlan {
  std::vector<std::vector<int32_t>> picks;  // [seat][infoset]
};

// Pure coordinator strategy over a converted game's perfect-recall partition.
using CoordinatorPlan = std::vector<int32_t>;

// Per-node behavioral lookup; must return a distribution over the node's
// actions for every decision node of the strategy's owner.
using PolicyFn = std::function<const std::vector<double>*(NodeId)>;

// Adapts a per-infoset strategy to a per-node lookup.
PolicyFn PolicyOver(const InfosetPartition& part,
                    const BehavioralStrategy& strategy);

// Exact expected payoff per payoff row under per-node policies supplied for
// every strategic player (probabilities are converted to exact rationals).
std::vector<Rat> ExpectedValues(const Vefg& g,
                                const std::vector<PolicyFn>& by_observer_row);

// Expected payoffs of a pure profile: one plan per team seat plus an
// opponent plan (chance weighted exactly). Opponent plan may be empty when
// the game has no opponent.
std::vector<Rat> ExpectedValuesPure(const Vefg& g, const JointPlan& team,
                                    const std::vector<int32_t>& opponent);

struct BestResponseResult {
  double value = 0;                // responder's expected value
  std::vector<int32_t> strategy;  // pure pick per responder infoset
};

// Exact best response of `responder` against the fixed policies of everyone
// else; ties break toward the lowest action index. The responder must have
// perfect recall under `part`.
BestResponseResult BestResponse(const Vefg& g, Player responder,
                                const InfosetPartition& part,
                                const PolicyFn& others);

// Sum of both sides' best-response gains; zero exactly at an equilibrium.
double Exploitability(const SolveView& view, const BehavioralStrategy& s0,
                      const BehavioralStrategy& s1);

// Exploitability of an abstracted coordinator strategy measured on the
// folded (perfect-recall) tree it came from.
double ExploitabilityLifted(const Tpi& tpi, const BehavioralStrategy& s0,
                            const BehavioralStrategy& s1);

// The strategy-space maps between the source game and its conversion:
// a joint team plan to a coordinator plan and back.
CoordinatorPlan MapRho(const Vefg& source, const JointPlan& team,
                       const Tpi& tpi);
JointPlan MapSigma(const Tpi& tpi, const CoordinatorPlan& plan,
                   const Vefg& source);

// All reduced pure strategies of one player, enumerated canonically.
std::vector<std::vector<int32_t>> EnumerateReducedPlans(const Vefg& g,
                                                        Player p);

struct OracleResult {
  double value = 0;
  std::vector<double> team_distribution;  // over joint reduced team plans
  std::vector<JointPlan> joint_plans;
  double gap = 0;
};

// Brute-force team max-min over joint reduced plans: builds the payoff
// matrix against opponent reduced plans (chance marginalized exactly) and
// solves it by regret matching to the given duality-gap tolerance.
OracleResult TmecorBruteforce(const Vefg& g, int64_t plan_budget = 2000,
                              double gap_tolerance = 1e-6,
                              int64_t max_iterations = 2'000'000);

}  // namespace tpig

#endif  // TPIG_EVALUATION_HPP_
