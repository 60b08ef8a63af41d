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

#include "tpig/transform.hpp"

#include <vector>

namespace tpig {

Vefg InflateTeam(const Vefg& g) {
  Vefg out = g;
  for (ActionId a = 0; a < static_cast<ActionId>(out.actions.size()); ++a) {
    if (!out.actions[a].owner.is_seat()) continue;
    for (int s = 0; s < out.num_seats; ++s)
      out.SetVisible(Player::Seat(s), a, true);
  }
  out.InvalidateCaches();
  return out;
}

Vefg MakePublicTurnTaking(const Vefg& g) {
  TPIG_CHECK(g.frozen(), Error, "input must be frozen");
  // Round-robin cycle: team seats in index order, opponent, then chance.
  // Slots are only created for players that actually occur in the game.
  std::vector<Player> cycle;
  for (int s = 0; s < g.num_seats; ++s) cycle.push_back(Player::Seat(s));
  if (g.has_opponent) cycle.push_back(Player::Opponent());
  bool has_chance = false;
  for (const Node& n : g.nodes)
    if (!n.terminal() && n.player.is_chance()) has_chance = true;
  if (has_chance) cycle.push_back(Player::Chance());

  Vefg out;
  out.num_seats = g.num_seats;
  out.has_opponent = g.has_opponent;
  out.has_coordinator = g.has_coordinator;
  out.actions = g.actions;
  out.visibility = g.visibility;

  std::vector<ActionId> dummy(cycle.size(), kNoAction);
  for (size_t i = 0; i < cycle.size(); ++i) {
    dummy[i] = out.AddAction("wait:" + cycle[i].ToString(), cycle[i],
                             /*dummy=*/true);
    if (!cycle[i].is_chance()) out.SetVisible(cycle[i], dummy[i], true);
  }

  uint64_t bound = static_cast<uint64_t>(cycle.size() + 1) *
                   g.nodes.size() * g.nodes.size();

  struct Frame {
    NodeId src;
    NodeId dst_parent;
    ActionId via;
    int level;
  };
  std::vector<Frame> todo{{0, kNoNode, kNoAction, 0}};
  while (!todo.empty()) {
    Frame f = todo.back();
    todo.pop_back();
    const Node& s = g.nodes[f.src];
    TPIG_CHECK(out.nodes.size() <= bound, NotTimeable,
               "turn-taking expansion exceeded the (|N|+1)|H|^2 bound");
    if (s.terminal()) {
      NodeId z = out.AddChild(f.dst_parent, f.via, Player::Chance());
      out.SetPayoffs(z, s.payoffs);
      continue;
    }
    Player scheduled = cycle[f.level % cycle.size()];
    if (s.player == scheduled) {
      NodeId n = out.AddChild(f.dst_parent, f.via, s.player);
      if (s.player.is_chance()) out.SetChance(n, s.chance);
      // Push children in reverse so the output arena keeps source order.
      for (int i = s.num_actions() - 1; i >= 0; --i)
        todo.push_back({s.edges[i].child, n, s.edges[i].action, f.level + 1});
    } else {
      NodeId n = out.AddChild(f.dst_parent, f.via, scheduled);
      int slot = static_cast<int>(f.level % cycle.size());
      if (scheduled.is_chance()) out.SetChance(n, {Rat(1)});
      todo.push_back({f.src, n, dummy[slot], f.level + 1});
    }
  }
  out.Freeze();
  return out;
}

bool CheckCommonExternalInformation(const Vefg& g) {
  std::vector<Player> team;
  for (int s = 0; s < g.num_seats; ++s) team.push_back(Player::Seat(s));
  if (team.empty()) return true;
  for (ActionId a = 0; a < static_cast<ActionId>(g.actions.size()); ++a) {
    const Player owner = g.actions[a].owner;
    if (owner.is_seat()) continue;
    if (VisibilityForSet(g, team, a) == Vis3::kPriv) return false;
  }
  return true;
}

}  // namespace tpig
