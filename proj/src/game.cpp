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

#include "tpig/game.hpp"

#include <algorithm>
#include <sstream>

namespace tpig {

std::string RatToString(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

std::optional<Rat> RatFromString(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      if (!valid_int(s)) return std::nullopt;
      return Rat(boost::multiprecision::cpp_int(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den)) return std::nullopt;
    boost::multiprecision::cpp_int d(den);
    if (d == 0) return std::nullopt;
    return Rat(boost::multiprecision::cpp_int(num), d);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string Player::ToString() const {
  if (is_seat()) return "t" + std::to_string(seat());
  if (is_opponent()) return "o";
  if (is_chance()) return "c";
  return "x";
}

std::optional<Player> Player::FromString(const std::string& s) {
  if (s == "o") return Opponent();
  if (s == "c") return Chance();
  if (s == "x") return Coordinator();
  if (s.size() >= 2 && s[0] == 't') {
    for (size_t i = 1; i < s.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    return Seat(std::stoi(s.substr(1)));
  }
  return std::nullopt;
}

std::string ReprToString(Repr r) {
  switch (r) {
    case Repr::kSource: return "source";
    case Repr::kBasic: return "basic";
    case Repr::kPruned: return "pruned";
    case Repr::kFolded: return "folded";
    case Repr::kFoldedIR: return "folded-ir";
    case Repr::kFoldedLossy: return "folded-lossy";
  }
  return "?";
}

std::optional<Repr> ReprFromString(const std::string& s) {
  for (Repr r : {Repr::kSource, Repr::kBasic, Repr::kPruned, Repr::kFolded,
                 Repr::kFoldedIR, Repr::kFoldedLossy})
    if (ReprToString(r) == s) return r;
  return std::nullopt;
}

std::string Vis3ToString(Vis3 v) {
  switch (v) {
    case Vis3::kPub: return "pub";
    case Vis3::kPriv: return "priv";
    case Vis3::kHidden: return "hidden";
  }
  return "?";
}

std::string KeyToString(const InfosetKey& key) {
  std::ostringstream os;
  for (size_t i = 0; i < key.size(); ++i) {
    if (i) os << "/";
    uint64_t t = key[i];
    bool prescription = (t >> 63) != 0;
    int owner = static_cast<int>((t >> 56) & 0x7f) - 4;
    uint64_t sib = (t >> 28) & 0xfffffff;
    int64_t forced = static_cast<int64_t>(t & 0xfffffff) - 1;
    os << Player{static_cast<int8_t>(owner)}.ToString() << ".";
    if (prescription) {
      os << "g" << sib;
      if (forced >= 0) os << ":" << forced;
    } else {
      os << "a" << sib;
    }
  }
  return os.str();
}

namespace {

// Tokens identify an observed move by (acting player, child position); the
// player is part of an action's identity while labels are not, keeping the
// partition invariant under relabeling.
uint64_t OwnerCode(Player p) { return static_cast<uint64_t>(p.v + 4); }

ObsToken PackPlain(Player owner, int sib) {
  return (OwnerCode(owner) << 56) | (static_cast<uint64_t>(sib) << 28);
}

// forced_sib is stored shifted by one: zero marks a selector edge whose
// outcome is observed at the selector chance node instead.
ObsToken PackPrescription(int sib, int forced_sib) {
  return (1ull << 63) | (OwnerCode(Player::Coordinator()) << 56) |
         (static_cast<uint64_t>(sib) << 28) |
         static_cast<uint64_t>(forced_sib + 1);
}

}  // namespace

ObsToken MakePlainToken(Player owner, int sib) {
  return PackPlain(owner, sib);
}

ObsToken MakeBeliefToken(int32_t belief_id) {
  return (3ull << 62) | static_cast<uint32_t>(belief_id);
}

int Vefg::observer_row(Player p) const {
  if (p.is_seat()) return p.seat();
  if (p.is_opponent()) return num_seats;
  if (p.is_coordinator()) return num_seats + (has_opponent ? 1 : 0);
  throw Error("chance has no observer row");
}

Player Vefg::row_player(int row) const {
  if (row < num_seats) return Player::Seat(row);
  if (has_opponent && row == num_seats) return Player::Opponent();
  return Player::Coordinator();
}

ActionId Vefg::AddAction(const std::string& label, Player owner, bool dummy) {
  actions.push_back(ActionDef{label, owner, dummy});
  for (auto& row : visibility) row.push_back(0);
  return static_cast<ActionId>(actions.size() - 1);
}

NodeId Vefg::AddChild(NodeId parent, ActionId action, Player player) {
  Node n;
  n.player = player;
  n.parent = parent;
  if (parent != kNoNode) {
    n.parent_edge = static_cast<int32_t>(nodes[parent].edges.size());
    n.depth = nodes[parent].depth + 1;
  }
  NodeId id = static_cast<NodeId>(nodes.size());
  nodes.push_back(std::move(n));
  if (parent != kNoNode)
    nodes[parent].edges.push_back(Edge{action, id, kNoAction, -1});
  return id;
}

void Vefg::SetChance(NodeId n, std::vector<Rat> probs) {
  nodes[n].chance = std::move(probs);
}

void Vefg::SetPayoffs(NodeId n, std::vector<Rat> payoffs) {
  nodes[n].payoffs = std::move(payoffs);
}

void Vefg::SetVisible(Player observer, ActionId a, bool visible) {
  visibility[observer_row(observer)][a] = visible ? 1 : 0;
}

void Vefg::Freeze() {
  TPIG_CHECK(!nodes.empty(), Error, "empty game");
  TPIG_CHECK(static_cast<int>(visibility.size()) == num_observers(), Error,
             "visibility rows do not match observers");
  for (auto& row : visibility)
    TPIG_CHECK(row.size() == actions.size(), VisibilityIncomplete,
               "visibility row does not cover every action");
  for (NodeId i = 0; i < static_cast<NodeId>(nodes.size()); ++i) {
    const Node& n = nodes[i];
    if (n.parent != kNoNode) {
      TPIG_CHECK(n.parent < i, Error, "arena not in topological order");
      nodes[i].depth = nodes[n.parent].depth + 1;
    }
    if (n.player.is_chance() && !n.terminal())
      TPIG_CHECK(n.chance.size() == n.edges.size(), Error,
                 "chance node without per-edge probabilities");
  }
  frozen_ = true;
  InvalidateCaches();
}

void Vefg::InvalidateCaches() {
  infoset_cache_.assign(num_observers(), {});
  infoset_cache_valid_.assign(num_observers(), 0);
}

std::optional<ObsToken> Vefg::ObservationToken(NodeId n, int e_idx,
                                               Player p) const {
  const Node& node = nodes[n];
  const Edge& e = node.edges[e_idx];
  if (node.player.is_coordinator()) {
    // Prescription edge of a converted game. The coordinator sees both its
    // pick and the action actually played from it; everyone else may see
    // only the played source action.
    if (p.is_coordinator()) return PackPrescription(e_idx, e.forced_sib);
    if (e.forced != kNoAction && observes(p, e.forced))
      return PackPlain(actions[e.forced].owner, e.forced_sib);
    return std::nullopt;
  }
  // Plain edge. Folded selector nodes replay a source action from a chance
  // node; they carry the source position so views line up across
  // representations.
  if (observes(p, e.action))
    return PackPlain(actions[e.action].owner,
                     e.forced_sib >= 0 ? e.forced_sib : e_idx);
  return std::nullopt;
}

InfosetKey Vefg::ObservationKey(NodeId n, Player p) const {
  std::vector<std::pair<NodeId, int>> path;
  for (NodeId cur = n; nodes[cur].parent != kNoNode;
       cur = nodes[cur].parent)
    path.emplace_back(nodes[cur].parent, nodes[cur].parent_edge);
  InfosetKey key;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    auto tok = ObservationToken(it->first, it->second, p);
    if (tok) key.push_back(*tok);
  }
  return key;
}

const InfosetPartition& Vefg::infosets(Player p) const {
  TPIG_CHECK(frozen_, Error, "derive called before Freeze");
  int row = observer_row(p);
  if (infoset_cache_valid_[row]) return infoset_cache_[row];

  InfosetPartition part;
  part.node_to_set.assign(nodes.size(), -1);
  std::map<InfosetKey, int32_t> index;
  // Iterative DFS carrying the observer's running view.
  struct Item {
    NodeId node;
    bool leaving;
  };
  std::vector<Item> stack{{0, false}};
  InfosetKey view;
  std::vector<uint8_t> pushed(nodes.size(), 0);
  while (!stack.empty()) {
    auto [id, leaving] = stack.back();
    stack.pop_back();
    const Node& node = nodes[id];
    if (leaving) {
      if (pushed[id]) view.pop_back();
      continue;
    }
    if (node.parent != kNoNode) {
      auto tok = ObservationToken(node.parent, node.parent_edge, p);
      if (tok) {
        view.push_back(*tok);
        pushed[id] = 1;
      }
    }
    if (node.player == p && !node.terminal()) {
      auto [it, inserted] = index.emplace(view, part.sets.size());
      if (inserted)
        part.sets.push_back(Infoset{p, view, {}, node.num_actions()});
      Infoset& is = part.sets[it->second];
      is.nodes.push_back(id);
      part.node_to_set[id] = it->second;
    }
    stack.push_back({id, true});
    for (int i = node.num_actions() - 1; i >= 0; --i)
      stack.push_back({node.edges[i].child, false});
  }
  for (auto& [key, idx] : index) part.sets[idx].key = key;
  for (Infoset& is : part.sets) std::sort(is.nodes.begin(), is.nodes.end());
  infoset_cache_[row] = std::move(part);
  infoset_cache_valid_[row] = 1;
  return infoset_cache_[row];
}

std::vector<Player> Vefg::team_players() const {
  std::vector<Player> out;
  for (int i = 0; i < num_seats; ++i) out.push_back(Player::Seat(i));
  if (has_coordinator) out.push_back(Player::Coordinator());
  return out;
}

std::vector<Player> Vefg::strategic_players() const {
  std::vector<Player> out = team_players();
  if (has_opponent) out.push_back(Player::Opponent());
  return out;
}

Rat Vefg::team_value(NodeId z) const {
  const Node& n = nodes[z];
  Rat sum = 0;
  for (int i = 0; i < num_seats; ++i) sum += n.payoffs[i];
  if (has_coordinator) sum += n.payoffs[observer_row(Player::Coordinator())];
  return sum;
}

Vis3 VisibilityForSet(const Vefg& g, const std::vector<Player>& players,
                      ActionId a) {
  TPIG_CHECK(!players.empty(), Error, "empty player set");
  int seen = 0;
  for (Player p : players)
    if (g.observes(p, a)) ++seen;
  if (seen == static_cast<int>(players.size())) return Vis3::kPub;
  if (seen == 0) return Vis3::kHidden;
  return Vis3::kPriv;
}

PublicPartition ComputePublicStates(const Vefg& g,
                                    const std::vector<Player>& players) {
  TPIG_CHECK(g.frozen(), Error, "public states require a frozen game");
  PublicPartition part;
  part.node_to_state.assign(g.nodes.size(), -1);
  std::map<InfosetKey, int32_t> index;
  struct Item {
    NodeId node;
    bool leaving;
  };
  std::vector<Item> stack{{0, false}};
  InfosetKey view;
  std::vector<uint8_t> pushed(g.nodes.size(), 0);
  while (!stack.empty()) {
    auto [id, leaving] = stack.back();
    stack.pop_back();
    const Node& node = g.nodes[id];
    if (leaving) {
      if (pushed[id]) view.pop_back();
      continue;
    }
    if (node.parent != kNoNode) {
      // The action is public for the set iff every member observes it. For
      // coordinator edges the constituent observations differ per member, so
      // evaluate via the per-member tokens: all must see, and the token used
      // is the acting-edge one.
      const Node& par = g.nodes[node.parent];
      bool all = true;
      for (Player p : players)
        if (!g.ObservationToken(node.parent, node.parent_edge, p)) {
          all = false;
          break;
        }
      if (all) {
        // The common observation of the set. At coordinator edges only the
        // coordinator sees the prescription pick; any wider set shares just
        // the action actually played.
        const Edge& e = par.edges[node.parent_edge];
        ObsToken tok;
        if (!par.player.is_coordinator()) {
          tok = PackPlain(g.actions[e.action].owner,
                          e.forced_sib >= 0 ? e.forced_sib
                                            : node.parent_edge);
        } else if (players.size() == 1 && players[0].is_coordinator()) {
          tok = PackPrescription(node.parent_edge, e.forced_sib);
        } else {
          tok = PackPlain(g.actions[e.forced].owner, e.forced_sib);
        }
        view.push_back(tok);
        pushed[id] = 1;
      }
    }
    auto [it, inserted] = index.emplace(view, part.states.size());
    if (inserted) part.states.push_back(PublicState{view, {}});
    part.states[it->second].nodes.push_back(id);
    part.node_to_state[id] = it->second;
    stack.push_back({id, true});
    for (int i = node.num_actions() - 1; i >= 0; --i)
      stack.push_back({node.edges[i].child, false});
  }
  for (auto& [key, idx] : index) part.states[idx].key = key;
  return part;
}

TurnTakingResult CheckPublicTurnTaking(const Vefg& g) {
  for (Player p : g.strategic_players()) {
    const InfosetPartition& part = g.infosets(p);
    for (int32_t i = 0; i < static_cast<int32_t>(part.sets.size()); ++i) {
      const Infoset& is = part.sets[i];
      std::vector<Player> ref;
      for (size_t k = 0; k < is.nodes.size(); ++k) {
        std::vector<Player> seq;
        for (NodeId cur = is.nodes[k]; cur != kNoNode;
             cur = g.nodes[cur].parent)
          seq.push_back(g.nodes[cur].player);
        std::reverse(seq.begin(), seq.end());
        if (k == 0) {
          ref = seq;
        } else if (seq != ref) {
          return TurnTakingResult{false, p, i};
        }
      }
    }
  }
  return TurnTakingResult{true, Player::Chance(), -1};
}

ValidationReport Validate(const Vefg& g) {
  ValidationReport rep;
  // Zero-sum between the team aggregate and the opponent.
  if (g.has_opponent) {
    int orow = g.observer_row(Player::Opponent());
    for (NodeId i = 0; i < static_cast<NodeId>(g.nodes.size()); ++i) {
      const Node& n = g.nodes[i];
      if (!n.terminal()) continue;
      if (n.payoffs.empty()) continue;
      if (g.team_value(i) != -n.payoffs[orow]) {
        rep.zero_sum_ok = false;
        rep.issues.push_back(
            {"zero-sum", "terminal " + std::to_string(i) +
                             " team aggregate does not offset opponent"});
        break;
      }
    }
  }
  for (NodeId i = 0; i < static_cast<NodeId>(g.nodes.size()); ++i) {
    const Node& n = g.nodes[i];
    if (!n.player.is_chance() || n.terminal()) continue;
    Rat sum = 0;
    bool neg = false;
    for (const Rat& p : n.chance) {
      sum += p;
      if (p < 0) neg = true;
    }
    if (sum != 1 || neg) {
      rep.chance_normalized_ok = false;
      rep.issues.push_back(
          {"chance-normalization",
           "chance node " + std::to_string(i) + " sums to " +
               RatToString(sum)});
      break;
    }
  }
  // Per-player structure and perfect recall.
  for (Player p : g.strategic_players()) {
    const InfosetPartition& part = g.infosets(p);
    for (const Infoset& is : part.sets) {
      for (NodeId nid : is.nodes) {
        if (g.nodes[nid].num_actions() != is.num_actions) {
          rep.structure_ok = false;
          rep.issues.push_back(
              {"infoset-actions",
               "infoset of " + p.ToString() +
                   " mixes nodes with different action counts"});
          break;
        }
      }
    }
    // Perfect recall: all members of an infoset agree on the sequence of the
    // player's own past (infoset, action) pairs.
    for (const Infoset& is : part.sets) {
      std::vector<std::pair<int32_t, int32_t>> ref;
      bool have_ref = false;
      for (NodeId nid : is.nodes) {
        std::vector<std::pair<int32_t, int32_t>> own;
        NodeId cur = nid;
        while (g.nodes[cur].parent != kNoNode) {
          NodeId par = g.nodes[cur].parent;
          if (g.nodes[par].player == p)
            own.emplace_back(part.node_to_set[par],
                             g.nodes[cur].parent_edge);
          cur = par;
        }
        std::reverse(own.begin(), own.end());
        if (!have_ref) {
          ref = own;
          have_ref = true;
        } else if (own != ref) {
          rep.perfect_recall_ok = false;
          rep.issues.push_back(
              {"perfect-recall",
               p.ToString() + " forgets its own past at an infoset"});
          break;
        }
      }
      if (!rep.perfect_recall_ok) break;
    }
  }
  // Team-level visibility diagnostics.
  std::vector<Player> team;
  for (int i = 0; i < g.num_seats; ++i) team.push_back(Player::Seat(i));
  if (team.size() >= 1) {
    for (ActionId a = 0; a < static_cast<ActionId>(g.actions.size()); ++a) {
      Player owner = g.actions[a].owner;
      if (owner.is_seat()) {
        for (Player t : team)
          if (t != owner && !g.observes(t, a)) {
            rep.hidden_team_action = true;
            rep.issues.push_back(
                {"non-visibility over a team member's action",
                 "action '" + g.actions[a].label + "' of " +
                     owner.ToString() + " is hidden from " + t.ToString()});
          }
      } else if (team.size() >= 2) {
        if (VisibilityForSet(g, team, a) == Vis3::kPriv) {
          rep.private_external_signal = true;
          rep.issues.push_back(
              {"private information disclosed to a subset of the team",
               "action '" + g.actions[a].label + "' is priv for the team"});
        }
      }
    }
  }
  TurnTakingResult tt = CheckPublicTurnTaking(g);
  rep.public_turn_taking = tt.ok;
  if (!tt.ok) {
    rep.nonvisible_structure = true;
    rep.first_ptt_violation = tt.infoset_index;
    rep.ptt_violation_owner = tt.owner;
    rep.issues.push_back(
        {"non-visible game structure",
         "infoset " + std::to_string(tt.infoset_index) + " of " +
             tt.owner.ToString() + " mixes different player sequences"});
  }
  return rep;
}

}  // namespace tpig
