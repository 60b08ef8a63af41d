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

#ifndef TPIG_GAME_HPP_
#define TPIG_GAME_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tpig/errors.hpp"
#include "tpig/rational.hpp"

namespace tpig {

using NodeId = int32_t;
using ActionId = int32_t;
inline constexpr NodeId kNoNode = -1;
inline constexpr ActionId kNoAction = -1;

// A player is a team seat, the opponent, chance, or (in converted games) the
// team coordinator.
struct Player {
  static constexpr int8_t kOpponentV = -1;
  static constexpr int8_t kChanceV = -2;
  static constexpr int8_t kCoordinatorV = -3;

  int8_t v = kChanceV;

  static Player Seat(int i) { return Player{static_cast<int8_t>(i)}; }
  static Player Opponent() { return Player{kOpponentV}; }
  static Player Chance() { return Player{kChanceV}; }
  static Player Coordinator() { return Player{kCoordinatorV}; }

  bool is_seat() const { return v >= 0; }
  bool is_opponent() const { return v == kOpponentV; }
  bool is_chance() const { return v == kChanceV; }
  bool is_coordinator() const { return v == kCoordinatorV; }
  // Seats and the coordinator act on the team side of the zero-sum split.
  bool team_side() const { return is_seat() || is_coordinator(); }
  int seat() const { return v; }

  bool operator==(const Player& o) const { return v == o.v; }
  bool operator!=(const Player& o) const { return v != o.v; }
  bool operator<(const Player& o) const { return v < o.v; }

  std::string ToString() const;
  static std::optional<Player> FromString(const std::string& s);
};

struct ActionDef {
  std::string label;
  Player owner = Player::Chance();
  bool dummy = false;  // inserted by the turn-taking transform
};

struct Edge {
  ActionId action = kNoAction;
  NodeId child = kNoNode;
  // Set only on coordinator edges of converted games: the source action the
  // collapsed forced-chance node plays, and its child index at the source
  // node.
  ActionId forced = kNoAction;
  int32_t forced_sib = -1;
};

struct Node {
  NodeId parent = kNoNode;
  int32_t parent_edge = -1;
  int32_t depth = 0;
  Player player = Player::Chance();
  std::vector<Edge> edges;
  std::vector<Rat> chance;   // per-edge probabilities, chance nodes only
  std::vector<Rat> payoffs;  // per observer row, terminal nodes only

  bool terminal() const { return edges.empty(); }
  int num_actions() const { return static_cast<int>(edges.size()); }
};

// Observation token appended to an observer's view when an edge is traversed.
// Packs a tag (plain action vs. prescription pick) with child indices so that
// keys depend on positions, not on action labels.
using ObsToken = uint64_t;
using InfosetKey = std::vector<ObsToken>;

std::string KeyToString(const InfosetKey& key);

// Token constructors shared with the abstraction re-keying.
ObsToken MakePlainToken(Player owner, int sib);
ObsToken MakeBeliefToken(int32_t belief_id);

struct Infoset {
  Player owner;
  InfosetKey key;
  std::vector<NodeId> nodes;  // ascending ids; nodes[0] fixes action order
  int num_actions = 0;
};

// Infosets of one strategic observer, plus the node->infoset index.
struct InfosetPartition {
  std::vector<Infoset> sets;
  std::vector<int32_t> node_to_set;  // -1 for nodes not owned by the observer
};

enum class Vis3 : uint8_t { kPub, kPriv, kHidden };

struct PublicState {
  InfosetKey key;
  std::vector<NodeId> nodes;
};

struct PublicPartition {
  std::vector<PublicState> states;
  std::vector<int32_t> node_to_state;
};

struct ValidationIssue {
  std::string check;   // short machine-readable tag
  std::string detail;  // human-readable context
};

struct ValidationReport {
  bool zero_sum_ok = true;
  bool chance_normalized_ok = true;
  bool structure_ok = true;        // action-set consistency inside infosets
  bool perfect_recall_ok = true;   // per individual player
  bool public_turn_taking = true;
  int32_t first_ptt_violation = -1;  // infoset index in owner partition
  Player ptt_violation_owner = Player::Chance();
  // Team-level visibility diagnostics (why a naive merged team player would
  // have imperfect recall): hidden teammate action, non-visible structure,
  // private external signal.
  bool hidden_team_action = false;
  bool nonvisible_structure = false;
  bool private_external_signal = false;
  std::vector<ValidationIssue> issues;

  bool accepted() const {
    return zero_sum_ok && chance_normalized_ok && structure_ok &&
           perfect_recall_ok;
  }
};

enum class Repr : uint8_t {
  kSource,
  kBasic,
  kPruned,
  kFolded,
  kFoldedIR,
  kFoldedLossy,
};

std::string ReprToString(Repr r);
std::optional<Repr> ReprFromString(const std::string& s);

// Extensive-form game with per-(observer, action) visibility annotations.
// Nodes live in an immutable indexed arena; converted (TPI) games reuse the
// same structure with the coordinator in place of the team seats and carry
// extra bookkeeping in the Tpi wrapper (conversion.hpp).
class Vefg {
 public:
  int num_seats = 0;
  bool has_opponent = false;
  bool has_coordinator = false;
  std::vector<Node> nodes;
  std::vector<ActionDef> actions;
  // visibility[row][action]: 1 if the row's observer sees the action when it
  // is played. Rows follow observer_rows() order.
  std::vector<std::vector<uint8_t>> visibility;

  // --- observers ---------------------------------------------------------
  int num_observers() const {
    return num_seats + (has_opponent ? 1 : 0) + (has_coordinator ? 1 : 0);
  }
  int observer_row(Player p) const;
  Player row_player(int row) const;
  bool observes(Player p, ActionId a) const {
    return visibility[observer_row(p)][a] != 0;
  }

  // --- construction ------------------------------------------------------
  ActionId AddAction(const std::string& label, Player owner,
                     bool dummy = false);
  NodeId AddChild(NodeId parent, ActionId action, Player player);
  void SetChance(NodeId n, std::vector<Rat> probs);
  void SetPayoffs(NodeId n, std::vector<Rat> payoffs);
  void SetVisible(Player observer, ActionId a, bool visible);
  // Completes construction: fills depths, checks arena consistency.
  void Freeze();

  // --- derived information ----------------------------------------------
  // Per-observer infoset partitions (Proposition-style grouping by observed
  // subsequences). Cached after the first call; the game must be frozen.
  const InfosetPartition& infosets(Player p) const;
  void InvalidateCaches();

  // Observation token of edge `e_idx` at node `n` for observer `p`, or
  // nullopt if the observer does not see the action.
  std::optional<ObsToken> ObservationToken(NodeId n, int e_idx,
                                           Player p) const;
  // The observer's full view along the path from the root to `n` (exclusive).
  InfosetKey ObservationKey(NodeId n, Player p) const;

  std::vector<Player> team_players() const;
  std::vector<Player> strategic_players() const;
  // Total payoff for the team side at a terminal (sum over seats, or the
  // coordinator entry in converted games).
  Rat team_value(NodeId z) const;

  bool frozen() const { return frozen_; }

 private:
  bool frozen_ = false;
  mutable std::vector<InfosetPartition> infoset_cache_;
  mutable std::vector<uint8_t> infoset_cache_valid_;
};

// Three-way visibility of `a` for the player set `players`.
Vis3 VisibilityForSet(const Vefg& g, const std::vector<Player>& players,
                      ActionId a);

// Groups all nodes by their `players`-public observed subsequence.
PublicPartition ComputePublicStates(const Vefg& g,
                                    const std::vector<Player>& players);

// True iff inside every infoset all member histories share the same
// root-to-node player sequence. On failure also reports the first violating
// infoset (owner + index into its partition).
struct TurnTakingResult {
  bool ok = true;
  Player owner = Player::Chance();
  int32_t infoset_index = -1;
};
TurnTakingResult CheckPublicTurnTaking(const Vefg& g);

ValidationReport Validate(const Vefg& g);

std::string Vis3ToString(Vis3 v);

}  // namespace tpig

#endif  // TPIG_GAME_HPP_
