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

#ifndef TPIG_CONVERSION_HPP_
#define TPIG_CONVERSION_HPP_

#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "tpig/game.hpp"

namespace tpig {

// One component of a prescription domain: a team infoset of the source game
// identified by (seat, index into that seat's partition), together with its
// ordered action ids.
struct ScopeEntry {
  int32_t seat = -1;
  int32_t infoset = -1;
  int32_t num_actions = 0;
  std::vector<ActionId> actions;

  bool operator==(const ScopeEntry&) const = default;
  bool operator<(const ScopeEntry& o) const {
    return std::tie(seat, infoset) < std::tie(o.seat, o.infoset);
  }
};

// A joint private state of the team: the sequence of folded chance actions
// along a source history (e.g. the cards dealt to the team seats).
using StateSig = std::vector<ActionId>;

// Exact distribution over joint private states, canonical order by signature
// id, all entries strictly positive, sums to one.
struct Belief {
  std::vector<std::pair<int32_t, Rat>> support;

  bool operator==(const Belief&) const = default;
  bool operator<(const Belief& o) const { return support < o.support; }
};

// Posterior after observing evidence whose likelihood per support entry is
// given. Zero-likelihood states drop out of the support.
Belief BeliefUpdate(const Belief& prior, const std::vector<Rat>& likelihood);

// How the prescription domain at a coordinator node is chosen.
enum class ScopePolicy {
  // All T_I-player infosets in the node's team-public state.
  kPublicState,
  // Public-state infosets minus those excluded by actions already played
  // from earlier prescriptions (the pruned conversion's exclusion set).
  kExcludePlayed,
  // Only infosets of private states still jointly consistent with every
  // observation of the coordinator.
  kSupport,
};

struct ConvertOptions {
  ScopePolicy scope = ScopePolicy::kPublicState;
  // Whether the acting player's parallel infosets stay in scope even when
  // that player never acts again.
  bool reflexive_ti = true;
  // Folded conversion: materialize the forced-chance selector node even when
  // a prescription has a single consistent outcome.
  bool always_materialize_selector = false;
  int64_t node_budget = 64'000'000;
};

// A converted team-public-information game. `game` is a plain Vefg whose
// players are the coordinator, the opponent (if any) and chance; the extra
// tables tie it back to the source game.
struct Tpi {
  Vefg game;
  Repr tag = Repr::kBasic;

  // Per converted node: a source node it corresponds to (the representative
  // member for folded games). kNoNode when provenance was stripped.
  std::vector<NodeId> src;

  // Prescription domains, interned; scope_of[n] indexes into scopes for
  // coordinator nodes and is -1 elsewhere. Coordinator edges are created in
  // lexicographic assignment order over the scope (last entry fastest);
  // `prescriptions` maps each prescription action back to its picks.
  std::vector<std::vector<ScopeEntry>> scopes;
  std::vector<int32_t> scope_of;
  std::map<ActionId, std::vector<int32_t>> prescriptions;

  // Folded bookkeeping: joint-state signatures, interned beliefs, and the
  // belief carried at each node (-1 for basic/pruned).
  std::vector<StateSig> sigs;
  std::vector<Belief> beliefs;
  std::vector<int32_t> belief_of;

  // Imperfect-recall keying (folded-ir / folded-lossy): overrides the
  // coordinator partition derived from the tree.
  InfosetPartition ir_partition;

  bool has_provenance() const { return !src.empty(); }
  // The partition the solver and the stats see for the coordinator.
  const InfosetPartition& coordinator_infosets() const;
  // The perfect-recall partition of the same tree (used to lift strategies
  // of abstracted games back onto the folded game).
  const InfosetPartition& coordinator_infosets_pr() const {
    return game.infosets(Player::Coordinator());
  }
  const InfosetPartition& opponent_infosets() const {
    return game.infosets(Player::Opponent());
  }

  // Per-scope-entry action picks of edge `k` at a coordinator node.
  const std::vector<int32_t>& DecodePrescription(NodeId n, int k) const;
};

// Preconditions shared by every conversion: the input validates, is
// completely inflated for the team, and is public-turn-taking. Throws
// PreconditionFailed naming the violated property.
void CheckConversionPreconditions(const Vefg& g);

// Ordered prescription domain at a team decision node, given the already
// excluded infosets. With no exclusions this is the basic enumeration.
std::vector<ScopeEntry> EnumerateScope(
    const Vefg& g, NodeId node,
    const std::vector<std::pair<int32_t, InfosetKey>>& excluded,
    const ConvertOptions& opts = {});

Tpi ConvertBasic(const Vefg& g, const ConvertOptions& opts = {});
Tpi ConvertPruned(const Vefg& g, const ConvertOptions& opts = {});
Tpi ConvertFolded(const Vefg& g, const ConvertOptions& opts = {});

// Dispatch by representation tag (folded-ir / folded-lossy go through the
// abstraction module).
Tpi Convert(const Vefg& g, Repr repr, const ConvertOptions& opts = {});

}  // namespace tpig

#endif  // TPIG_CONVERSION_HPP_
