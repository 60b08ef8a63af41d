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

#include "tpig/abstraction.hpp"

#include <algorithm>
#include <map>

namespace tpig {

namespace {

// Coordinator view with the prescription picks stripped: the current belief
// plus the public action/observation sequence.
InfosetKey IrKey(const Tpi& tpi, NodeId n) {
  const Vefg& g = tpi.game;
  InfosetKey key;
  key.push_back(MakeBeliefToken(tpi.belief_of[n]));
  std::vector<std::pair<NodeId, int>> path;
  for (NodeId cur = n; g.nodes[cur].parent != kNoNode;
       cur = g.nodes[cur].parent)
    path.emplace_back(g.nodes[cur].parent, g.nodes[cur].parent_edge);
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const Node& par = g.nodes[it->first];
    const Edge& e = par.edges[it->second];
    if (par.player.is_coordinator()) {
      if (e.forced != kNoAction)
        key.push_back(
            MakePlainToken(g.actions[e.forced].owner, e.forced_sib));
      // Selector edges reveal the outcome at the selector node below.
    } else {
      auto tok = g.ObservationToken(it->first, it->second,
                                    Player::Coordinator());
      if (tok) key.push_back(*tok);
    }
  }
  return key;
}

void BuildIrPartition(Tpi& tpi) {
  const Vefg& g = tpi.game;
  InfosetPartition part;
  part.node_to_set.assign(g.nodes.size(), -1);
  std::map<InfosetKey, int32_t> index;
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) {
    const Node& node = g.nodes[n];
    if (!node.player.is_coordinator() || node.terminal()) continue;
    InfosetKey key = IrKey(tpi, n);
    auto [it, inserted] = index.emplace(std::move(key), part.sets.size());
    if (inserted)
      part.sets.push_back(Infoset{Player::Coordinator(), it->first, {},
                                  node.num_actions()});
    Infoset& is = part.sets[it->second];
    // Merged nodes must offer identical prescription lists.
    const Node& rep = g.nodes[is.nodes.empty() ? n : is.nodes[0]];
    TPIG_CHECK(rep.num_actions() == node.num_actions(), Error,
               "imperfect-recall merge across different action counts");
    for (int k = 0; k < node.num_actions(); ++k)
      TPIG_CHECK(rep.edges[k].action == node.edges[k].action, Error,
                 "imperfect-recall merge across different prescriptions");
    is.nodes.push_back(n);
    part.node_to_set[n] = it->second;
  }
  for (Infoset& is : part.sets) std::sort(is.nodes.begin(), is.nodes.end());
  tpi.ir_partition = std::move(part);
}

}  // namespace

Tpi AbstractImperfectRecall(const Tpi& folded) {
  TPIG_CHECK(folded.tag == Repr::kFolded, PreconditionFailed,
             "imperfect-recall abstraction applies to folded games");
  Tpi out = folded;
  BuildIrPartition(out);
  out.tag = Repr::kFoldedIR;
  return out;
}

Tpi AbstractLossy(const Tpi& folded) {
  TPIG_CHECK(folded.tag == Repr::kFolded, PreconditionFailed,
             "lossy abstraction applies to folded games");
  const Vefg& g = folded.game;

  Tpi out;
  out.tag = Repr::kFolded;
  out.game.num_seats = 0;
  out.game.has_opponent = g.has_opponent;
  out.game.has_coordinator = true;
  out.game.actions = g.actions;
  out.game.visibility = g.visibility;
  out.scopes = folded.scopes;
  out.sigs = folded.sigs;
  out.beliefs = folded.beliefs;
  out.prescriptions = folded.prescriptions;

  struct Frame {
    NodeId src;
    NodeId parent;
    int32_t via_edge;  // edge index at the source parent
  };
  std::vector<Frame> todo{{0, kNoNode, -1}};
  while (!todo.empty()) {
    Frame f = todo.back();
    todo.pop_back();
    const Node& s = g.nodes[f.src];
    ActionId via = kNoAction;
    if (f.via_edge >= 0)
      via = g.nodes[s.parent].edges[f.via_edge].action;
    NodeId n = out.game.AddChild(f.parent, via, s.player);
    if (f.via_edge >= 0) {
      const Edge& se = g.nodes[s.parent].edges[f.via_edge];
      Edge& oe = out.game.nodes[f.parent].edges.back();
      oe.forced = se.forced;
      oe.forced_sib = se.forced_sib;
    }
    out.src.push_back(folded.has_provenance() ? folded.src[f.src] : kNoNode);
    out.scope_of.push_back(folded.scope_of[f.src]);
    out.belief_of.push_back(folded.belief_of[f.src]);
    if (s.terminal()) {
      out.game.SetPayoffs(n, s.payoffs);
      continue;
    }

    std::vector<int> kept;
    if (s.player.is_coordinator() &&
        folded.scopes[folded.scope_of[f.src]].size() >= 2 &&
        s.num_actions() >= 2) {
      const auto& scope = folded.scopes[folded.scope_of[f.src]];
      for (int k = 0; k < s.num_actions(); ++k) {
        const auto& picks = folded.DecodePrescription(f.src, k);
        bool uniform = true;
        for (size_t i = 1; i < scope.size(); ++i)
          if (scope[i].actions[picks[i]] != scope[0].actions[picks[0]]) {
            uniform = false;
            break;
          }
        if (!uniform) kept.push_back(k);
      }
      TPIG_CHECK(!kept.empty(), EmptyActionSet,
                 "lossy filter would strand converted node " +
                     std::to_string(f.src) + " (source node " +
                     std::to_string(folded.has_provenance()
                                        ? folded.src[f.src]
                                        : kNoNode) +
                     ")");
    } else {
      // Single-infoset scopes keep every prescription, as does a node whose
      // only prescription is uniform.
      kept.resize(s.num_actions());
      for (int k = 0; k < s.num_actions(); ++k) kept[k] = k;
    }

    if (s.player.is_chance()) {
      std::vector<Rat> probs;
      for (int k : kept) probs.push_back(s.chance[k]);
      out.game.SetChance(n, std::move(probs));
    }
    for (auto it = kept.rbegin(); it != kept.rend(); ++it)
      todo.push_back({s.edges[*it].child, n, *it});
  }
  out.game.Freeze();
  BuildIrPartition(out);
  out.tag = Repr::kFoldedLossy;
  return out;
}

Tpi ConvertAny(const Vefg& g, Repr repr, const ConvertOptions& opts) {
  switch (repr) {
    case Repr::kBasic:
    case Repr::kPruned:
    case Repr::kFolded:
      return Convert(g, repr, opts);
    case Repr::kFoldedIR:
      return AbstractImperfectRecall(ConvertFolded(g, opts));
    case Repr::kFoldedLossy:
      return AbstractLossy(ConvertFolded(g, opts));
    case Repr::kSource:
      break;
  }
  throw Error("cannot convert to the source representation");
}

}  // namespace tpig
