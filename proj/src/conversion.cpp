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

#include "tpig/conversion.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tpig/transform.hpp"

namespace tpig {

Belief BeliefUpdate(const Belief& prior, const std::vector<Rat>& likelihood) {
  TPIG_CHECK(likelihood.size() == prior.support.size(), Error,
             "likelihood size mismatch");
  Belief post;
  Rat total = 0;
  for (size_t i = 0; i < prior.support.size(); ++i) {
    TPIG_CHECK(likelihood[i] >= 0, Error, "negative likelihood");
    Rat mass = prior.support[i].second * likelihood[i];
    if (mass > 0) {
      post.support.emplace_back(prior.support[i].first, mass);
      total += mass;
    }
  }
  TPIG_CHECK(total > 0, ZeroProbabilityEvidence,
             "evidence has zero prior probability");
  for (auto& [sig, p] : post.support) p /= total;
  return post;
}

void CheckConversionPreconditions(const Vefg& g) {
  ValidationReport rep = Validate(g);
  TPIG_CHECK(rep.accepted(), PreconditionFailed,
             "input game fails validation (" +
                 (rep.issues.empty() ? std::string("unknown")
                                     : rep.issues.front().check) +
                 ")");
  for (ActionId a = 0; a < static_cast<ActionId>(g.actions.size()); ++a) {
    if (!g.actions[a].owner.is_seat()) continue;
    for (int s = 0; s < g.num_seats; ++s)
      TPIG_CHECK(g.observes(Player::Seat(s), a), PreconditionFailed,
                 "not completely inflated: team action '" +
                     g.actions[a].label + "' hidden from t" +
                     std::to_string(s));
  }
  TPIG_CHECK(CheckPublicTurnTaking(g).ok, PreconditionFailed,
             "not public-turn-taking");
}

const InfosetPartition& Tpi::coordinator_infosets() const {
  if (tag == Repr::kFoldedIR || tag == Repr::kFoldedLossy)
    return ir_partition;
  return game.infosets(Player::Coordinator());
}

const std::vector<int32_t>& Tpi::DecodePrescription(NodeId n, int k) const {
  auto it = prescriptions.find(game.nodes[n].edges[k].action);
  TPIG_CHECK(it != prescriptions.end(), ProvenanceMissing,
             "edge does not carry a prescription");
  return it->second;
}

namespace {

// Source-game structure shared by the converters.
struct SourceInfo {
  const Vefg* g = nullptr;
  std::vector<Player> team;
  std::vector<const InfosetPartition*> parts;  // per seat
  PublicPartition pub;
  // Team infosets per public state, ordered by ascending infoset key.
  std::vector<std::vector<ScopeEntry>> ps_scope;
  // Seats that act at-or-after each (seat, infoset), as bitmasks.
  std::vector<std::vector<uint32_t>> ti, ti_strict;
  std::vector<uint8_t> vis_pub_team;  // per action: pub for the whole team

  const InfosetKey& key_of(const ScopeEntry& e) const {
    return parts[e.seat]->sets[e.infoset].key;
  }
  NodeId rep_of(const ScopeEntry& e) const {
    return parts[e.seat]->sets[e.infoset].nodes[0];
  }
  ScopeEntry MakeEntry(int seat, int32_t infoset) const {
    const Infoset& is = parts[seat]->sets[infoset];
    ScopeEntry e{seat, infoset, is.num_actions, {}};
    for (const Edge& edge : g->nodes[is.nodes[0]].edges)
      e.actions.push_back(edge.action);
    return e;
  }
};

SourceInfo AnalyzeSource(const Vefg& g) {
  SourceInfo si;
  si.g = &g;
  for (int s = 0; s < g.num_seats; ++s) si.team.push_back(Player::Seat(s));
  for (int s = 0; s < g.num_seats; ++s)
    si.parts.push_back(&g.infosets(Player::Seat(s)));
  si.pub = ComputePublicStates(g, si.team);

  si.ps_scope.resize(si.pub.states.size());
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) {
    const Node& node = g.nodes[n];
    if (node.terminal() || !node.player.is_seat()) continue;
    int seat = node.player.seat();
    int32_t is = si.parts[seat]->node_to_set[n];
    int32_t ps = si.pub.node_to_state[n];
    auto& list = si.ps_scope[ps];
    ScopeEntry e = si.MakeEntry(seat, is);
    if (std::find(list.begin(), list.end(), e) == list.end())
      list.push_back(std::move(e));
  }
  for (auto& list : si.ps_scope)
    std::sort(list.begin(), list.end(),
              [&](const ScopeEntry& a, const ScopeEntry& b) {
                const InfosetKey &ka = si.key_of(a), &kb = si.key_of(b);
                if (ka != kb) return ka < kb;
                return a.seat < b.seat;
              });

  si.ti.resize(g.num_seats);
  si.ti_strict.resize(g.num_seats);
  for (int s = 0; s < g.num_seats; ++s) {
    si.ti[s].assign(si.parts[s]->sets.size(), 0);
    si.ti_strict[s].assign(si.parts[s]->sets.size(), 0);
  }
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) {
    const Node& node = g.nodes[n];
    if (node.terminal() || !node.player.is_seat()) continue;
    uint32_t bit = 1u << node.player.seat();
    for (NodeId a = n; a != kNoNode; a = g.nodes[a].parent) {
      const Node& anc = g.nodes[a];
      if (!anc.terminal() && anc.player.is_seat()) {
        int aseat = anc.player.seat();
        int32_t ais = si.parts[aseat]->node_to_set[a];
        si.ti[aseat][ais] |= bit;
        if (a != n) si.ti_strict[aseat][ais] |= bit;
      }
    }
  }

  si.vis_pub_team.resize(g.actions.size());
  for (ActionId a = 0; a < static_cast<ActionId>(g.actions.size()); ++a)
    si.vis_pub_team[a] =
        VisibilityForSet(g, si.team, a) == Vis3::kPub ? 1 : 0;
  return si;
}

// Persistent exclusion chains: each branch of the pruned conversion extends
// its parent's chain without copying.
struct XPool {
  struct Entry {
    int32_t parent;
    int32_t seat;
    int32_t infoset;
  };
  std::vector<Entry> pool;

  int32_t Push(int32_t chain, int32_t seat, int32_t infoset) {
    pool.push_back({chain, seat, infoset});
    return static_cast<int32_t>(pool.size() - 1);
  }
};

bool IsPrefix(const InfosetKey& pre, const InfosetKey& full) {
  if (pre.size() > full.size()) return false;
  return std::equal(pre.begin(), pre.end(), full.begin());
}

// True if `e` descends from an excluded infoset of the same seat: the
// excluded key is a prefix of e's key (observations only accumulate).
bool Excluded(const SourceInfo& si, const XPool& xp, int32_t chain,
              const ScopeEntry& e) {
  for (int32_t c = chain; c >= 0; c = xp.pool[c].parent) {
    const auto& x = xp.pool[c];
    if (x.seat != e.seat) continue;
    if (x.infoset == e.infoset) return true;
    if (IsPrefix(si.parts[x.seat]->sets[x.infoset].key, si.key_of(e)))
      return true;
  }
  return false;
}

std::vector<ScopeEntry> ScopeAt(const SourceInfo& si, NodeId n,
                                const ConvertOptions& opts, const XPool& xp,
                                int32_t chain,
                                const std::vector<ScopeEntry>* support) {
  const Vefg& g = *si.g;
  int seat = g.nodes[n].player.seat();
  int32_t own = si.parts[seat]->node_to_set[n];
  if (opts.scope == ScopePolicy::kSupport && support != nullptr)
    return *support;

  const auto& masks = opts.reflexive_ti ? si.ti : si.ti_strict;
  uint32_t mask = masks[seat][own];
  std::vector<ScopeEntry> out;
  bool have_own = false;
  for (const ScopeEntry& e : si.ps_scope[si.pub.node_to_state[n]]) {
    if (!((mask >> e.seat) & 1u)) continue;
    if (opts.scope == ScopePolicy::kExcludePlayed &&
        Excluded(si, xp, chain, e))
      continue;
    out.push_back(e);
    if (e.seat == seat && e.infoset == own) have_own = true;
  }
  if (!have_own) {
    // The acting infoset always takes part; others may have been filtered.
    out.push_back(si.MakeEntry(seat, own));
    std::sort(out.begin(), out.end(),
              [&](const ScopeEntry& a, const ScopeEntry& b) {
                const InfosetKey &ka = si.key_of(a), &kb = si.key_of(b);
                if (ka != kb) return ka < kb;
                return a.seat < b.seat;
              });
  }
  return out;
}

// Shared output-side helpers for both converters.
struct OutBuilder {
  const Vefg& g;
  const SourceInfo& si;
  const ConvertOptions& opts;
  Tpi tpi;
  std::map<std::vector<ScopeEntry>, int32_t> scope_ids;
  std::map<std::pair<int32_t, std::vector<int32_t>>, ActionId> prescriptions;

  OutBuilder(const Vefg& game, const SourceInfo& info,
             const ConvertOptions& options, Repr tag)
      : g(game), si(info), opts(options) {
    tpi.tag = tag;
    tpi.game.num_seats = 0;
    tpi.game.has_opponent = g.has_opponent;
    tpi.game.has_coordinator = true;
    tpi.game.actions = g.actions;
    tpi.game.visibility.assign(tpi.game.num_observers(), {});
    int orow = -1, crow = tpi.game.observer_row(Player::Coordinator());
    if (g.has_opponent) orow = tpi.game.observer_row(Player::Opponent());
    for (ActionId a = 0; a < static_cast<ActionId>(g.actions.size()); ++a) {
      if (g.has_opponent)
        tpi.game.visibility[orow].push_back(
            g.visibility[g.observer_row(Player::Opponent())][a]);
      tpi.game.visibility[crow].push_back(si.vis_pub_team[a]);
    }
  }

  int32_t InternScope(const std::vector<ScopeEntry>& scope) {
    auto [it, inserted] = scope_ids.emplace(scope, tpi.scopes.size());
    if (inserted) tpi.scopes.push_back(scope);
    return it->second;
  }

  ActionId PrescriptionAction(int32_t scope_id,
                              const std::vector<int32_t>& picks) {
    auto [it, inserted] =
        prescriptions.emplace(std::make_pair(scope_id, picks), kNoAction);
    if (inserted) {
      std::ostringstream label;
      label << "g" << scope_id << "[";
      for (size_t i = 0; i < picks.size(); ++i)
        label << (i ? "," : "") << picks[i];
      label << "]";
      ActionId a =
          tpi.game.AddAction(label.str(), Player::Coordinator());
      tpi.game.SetVisible(Player::Coordinator(), a, true);
      tpi.prescriptions.emplace(a, picks);
      it->second = a;
    }
    return it->second;
  }

  NodeId Emit(NodeId parent, ActionId via, Player player, NodeId src_node,
              int32_t belief = -1) {
    TPIG_CHECK(static_cast<int64_t>(tpi.game.nodes.size()) <
                   opts.node_budget,
               BudgetExceeded, "conversion exceeded the node budget");
    NodeId n = tpi.game.AddChild(parent, via, player);
    tpi.src.push_back(src_node);
    tpi.scope_of.push_back(-1);
    tpi.belief_of.push_back(belief);
    return n;
  }

  void SetForced(NodeId parent, ActionId forced, int32_t forced_sib) {
    Edge& e = tpi.game.nodes[parent].edges.back();
    e.forced = forced;
    e.forced_sib = forced_sib;
  }

  std::vector<Rat> TerminalPayoffs(const Rat& team_value) {
    std::vector<Rat> pay(tpi.game.num_observers(), Rat(0));
    pay[tpi.game.observer_row(Player::Coordinator())] = team_value;
    if (g.has_opponent)
      pay[tpi.game.observer_row(Player::Opponent())] = -team_value;
    return pay;
  }
};

int EdgeOf(const Node& n, ActionId a) {
  for (int i = 0; i < n.num_actions(); ++i)
    if (n.edges[i].action == a) return i;
  return -1;
}

Tpi ConvertTree(const Vefg& g, Repr tag, const ConvertOptions& opts) {
  CheckConversionPreconditions(g);
  SourceInfo si = AnalyzeSource(g);
  OutBuilder out(g, si, opts, tag);
  XPool xp;
  // Consistency bundles for the kSupport policy (node sets, interned).
  std::vector<std::vector<NodeId>> bundles;
  if (opts.scope == ScopePolicy::kSupport) bundles.push_back({0});

  struct Frame {
    NodeId src;
    NodeId parent;
    ActionId via;
    ActionId forced;
    int32_t forced_sib;
    int32_t x;
    int32_t bundle;
  };
  std::vector<Frame> todo{{0, kNoNode, kNoAction, kNoAction, -1, -1,
                           opts.scope == ScopePolicy::kSupport ? 0 : -1}};
  while (!todo.empty()) {
    Frame f = todo.back();
    todo.pop_back();
    const Node& s = g.nodes[f.src];

    if (s.terminal()) {
      NodeId n = out.Emit(f.parent, f.via, Player::Chance(), f.src);
      if (f.forced != kNoAction) out.SetForced(f.parent, f.forced,
                                               f.forced_sib);
      out.tpi.game.SetPayoffs(n, out.TerminalPayoffs(g.team_value(f.src)));
      continue;
    }

    if (!s.player.is_seat()) {  // opponent or chance: copied unaltered
      NodeId n = out.Emit(f.parent, f.via, s.player, f.src);
      if (f.forced != kNoAction) out.SetForced(f.parent, f.forced,
                                               f.forced_sib);
      if (s.player.is_chance()) out.tpi.game.SetChance(n, s.chance);
      int32_t child_bundle = -1;
      for (int i = s.num_actions() - 1; i >= 0; --i) {
        if (f.bundle >= 0) {
          // Advance every consistent source node over this step.
          std::vector<NodeId> nb;
          ActionId a = s.edges[i].action;
          bool seen = si.vis_pub_team[a] != 0;
          for (NodeId b : bundles[f.bundle]) {
            const Node& bn = g.nodes[b];
            for (int j = 0; j < bn.num_actions(); ++j) {
              if (bn.player.is_chance() && bn.chance[j] == 0) continue;
              if (seen && bn.edges[j].action != a) continue;
              nb.push_back(bn.edges[j].child);
            }
          }
          std::sort(nb.begin(), nb.end());
          nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
          bundles.push_back(std::move(nb));
          child_bundle = static_cast<int32_t>(bundles.size() - 1);
        }
        todo.push_back({s.edges[i].child, n, s.edges[i].action, kNoAction,
                        -1, f.x, child_bundle});
      }
      continue;
    }

    // Team decision node: the coordinator plays a prescription.
    std::vector<ScopeEntry> support;
    if (f.bundle >= 0) {
      for (NodeId b : bundles[f.bundle]) {
        const Node& bn = g.nodes[b];
        if (bn.terminal() || !bn.player.is_seat()) continue;
        int bs = bn.player.seat();
        ScopeEntry e = si.MakeEntry(bs, si.parts[bs]->node_to_set[b]);
        if (std::find(support.begin(), support.end(), e) == support.end())
          support.push_back(std::move(e));
      }
      std::sort(support.begin(), support.end(),
                [&](const ScopeEntry& a, const ScopeEntry& b) {
                  const InfosetKey &ka = si.key_of(a), &kb = si.key_of(b);
                  if (ka != kb) return ka < kb;
                  return a.seat < b.seat;
                });
    }
    std::vector<ScopeEntry> scope =
        ScopeAt(si, f.src, opts, xp, f.x, f.bundle >= 0 ? &support : nullptr);
    NodeId n = out.Emit(f.parent, f.via, Player::Coordinator(), f.src);
    if (f.forced != kNoAction) out.SetForced(f.parent, f.forced,
                                             f.forced_sib);
    int32_t scope_id = out.InternScope(scope);
    out.tpi.scope_of[n] = scope_id;

    int seat = s.player.seat();
    int32_t own = si.parts[seat]->node_to_set[f.src];
    int own_pos = -1;
    int64_t total = 1;
    for (size_t i = 0; i < scope.size(); ++i) {
      total *= scope[i].num_actions;
      if (scope[i].seat == seat && scope[i].infoset == own)
        own_pos = static_cast<int>(i);
    }
    TPIG_CHECK(own_pos >= 0, Error, "acting infoset missing from its scope");
    TPIG_CHECK(total <= (1 << 22), BudgetExceeded,
               "prescription fan-out too large");

    std::vector<int32_t> picks(scope.size(), 0);
    for (int64_t k = total - 1; k >= 0; --k) {
      int64_t rem = k;
      for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i) {
        picks[i] = static_cast<int32_t>(rem % scope[i].num_actions);
        rem /= scope[i].num_actions;
      }
      int forced_sib = picks[own_pos];
      ActionId forced = s.edges[forced_sib].action;
      ActionId ga = out.PrescriptionAction(scope_id, picks);

      int32_t child_x = f.x;
      if (opts.scope == ScopePolicy::kExcludePlayed) {
        for (size_t i = 0; i < scope.size(); ++i) {
          ActionId picked =
              g.nodes[si.rep_of(scope[i])].edges[picks[i]].action;
          if (picked != forced)
            child_x = xp.Push(child_x, scope[i].seat, scope[i].infoset);
        }
      }
      int32_t child_bundle = -1;
      if (f.bundle >= 0) {
        std::vector<NodeId> nb;
        for (NodeId b : bundles[f.bundle]) {
          const Node& bn = g.nodes[b];
          int bs = bn.player.seat();
          int32_t bis = si.parts[bs]->node_to_set[b];
          // The pick at b's infoset, if it is in scope; members outside the
          // scope cannot occur.
          for (size_t i = 0; i < scope.size(); ++i)
            if (scope[i].seat == bs && scope[i].infoset == bis) {
              ActionId played = bn.edges[picks[i]].action;
              if (played == forced) nb.push_back(bn.edges[picks[i]].child);
              break;
            }
        }
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        bundles.push_back(std::move(nb));
        child_bundle = static_cast<int32_t>(bundles.size() - 1);
      }
      todo.push_back({s.edges[forced_sib].child, n, ga, forced, forced_sib,
                      child_x, child_bundle});
    }
  }
  out.tpi.game.Freeze();
  return std::move(out.tpi);
}

// ---------------------------------------------------------------------------
// Folded conversion.

struct Member {
  NodeId node;
  int32_t sig;
  Rat w;
};

struct FoldState {
  OutBuilder& out;
  const SourceInfo& si;
  std::map<StateSig, int32_t> sig_ids;
  std::map<Belief, int32_t> belief_ids;
  XPool xp;

  int32_t InternSig(const StateSig& s) {
    auto [it, inserted] = sig_ids.emplace(s, out.tpi.sigs.size());
    if (inserted) out.tpi.sigs.push_back(s);
    return it->second;
  }
  int32_t InternBelief(const std::vector<Member>& members) {
    Belief b;
    Rat total = 0;
    for (const Member& m : members) total += m.w;
    for (const Member& m : members) b.support.emplace_back(m.sig, m.w / total);
    std::sort(b.support.begin(), b.support.end());
    auto [it, inserted] = belief_ids.emplace(b, out.tpi.beliefs.size());
    if (inserted) out.tpi.beliefs.push_back(b);
    return it->second;
  }
};

bool Foldable(const Vefg& g, const SourceInfo& si, ActionId a) {
  if (si.vis_pub_team[a]) return false;
  if (g.has_opponent && g.observes(Player::Opponent(), a)) return false;
  return true;
}

Tpi ConvertFoldedImpl(const Vefg& g, const ConvertOptions& opts) {
  CheckConversionPreconditions(g);
  SourceInfo si = AnalyzeSource(g);
  OutBuilder out(g, si, opts, Repr::kFolded);
  FoldState fs{out, si, {}, {}, {}};

  struct Frame {
    std::vector<Member> members;
    NodeId parent;
    ActionId via;
    ActionId forced;
    int32_t forced_sib;
    int32_t x;
    // When nonempty the frame is a pending prescription whose outcome is
    // still ambiguous: emit a forced-chance selector distributing over the
    // distinct played actions, then continue per branch.
    std::vector<int32_t> sel_picks;
    std::vector<int32_t> sel_pos;  // per member: its entry in the scope
    std::vector<ScopeEntry> sel_scope;
  };
  StateSig empty_sig;
  std::vector<Frame> todo;
  todo.push_back({{Member{0, fs.InternSig(empty_sig), Rat(1)}},
                  kNoNode, kNoAction, kNoAction, -1, -1,
                  {}, {}, {}});

  while (!todo.empty()) {
    Frame f = std::move(todo.back());
    todo.pop_back();

    if (!f.sel_picks.empty()) {
      // Forced-chance selector: one branch per distinct action the pending
      // prescription plays over the belief support, each weighted by the
      // mass of the private states prescribing it.
      std::vector<ActionId> dist;
      std::map<ActionId, std::pair<std::vector<Member>, int32_t>> branch;
      Rat total = 0;
      for (size_t mi = 0; mi < f.members.size(); ++mi) {
        const Node& mn = g.nodes[f.members[mi].node];
        int sib = f.sel_picks[f.sel_pos[mi]];
        ActionId played = mn.edges[sib].action;
        if (!branch.count(played)) {
          dist.push_back(played);
          branch[played] = {{}, sib};
        }
        branch[played].first.push_back(Member{
            mn.edges[sib].child, f.members[mi].sig, f.members[mi].w});
        total += f.members[mi].w;
      }
      std::sort(dist.begin(), dist.end());
      int32_t belief = fs.InternBelief(f.members);
      NodeId sel = out.Emit(f.parent, f.via, Player::Chance(),
                            f.members.front().node, belief);
      std::vector<Rat> probs;
      for (ActionId a : dist) {
        Rat mass = 0;
        for (const Member& m : branch[a].first) mass += m.w;
        probs.push_back(mass / total);
      }
      for (auto it = dist.rbegin(); it != dist.rend(); ++it) {
        int32_t bx = f.x;
        if (opts.scope == ScopePolicy::kExcludePlayed)
          for (size_t i = 0; i < f.sel_scope.size(); ++i) {
            ActionId picked = g.nodes[si.rep_of(f.sel_scope[i])]
                                  .edges[f.sel_picks[i]]
                                  .action;
            if (picked != *it)
              bx = fs.xp.Push(bx, f.sel_scope[i].seat,
                              f.sel_scope[i].infoset);
          }
        todo.push_back({std::move(branch[*it].first), sel, *it, *it,
                        branch[*it].second, bx, {}, {}, {}});
      }
      out.tpi.game.SetChance(sel, std::move(probs));
      continue;
    }

    // Resolve folded chance steps in place: they produce no node, only a
    // wider belief.
    for (;;) {
      const Node& rep = g.nodes[f.members.front().node];
      if (rep.terminal() || !rep.player.is_chance()) break;
      int foldable = -1;
      for (const Member& m : f.members) {
        const Node& mn = g.nodes[m.node];
        TPIG_CHECK(mn.player.is_chance() && !mn.terminal(),
                   FoldNotApplicable,
                   "bundle desynchronized at a chance step");
        for (int j = 0; j < mn.num_actions(); ++j) {
          if (mn.chance[j] == 0) continue;
          int fo = Foldable(g, si, mn.edges[j].action) ? 1 : 0;
          TPIG_CHECK(foldable == -1 || foldable == fo, FoldNotApplicable,
                     "chance node mixes folded and public outcomes");
          foldable = fo;
        }
      }
      if (foldable != 1) break;
      std::vector<Member> grown;
      for (const Member& m : f.members) {
        const Node& mn = g.nodes[m.node];
        for (int j = 0; j < mn.num_actions(); ++j) {
          if (mn.chance[j] == 0) continue;  // outside the belief support
          StateSig sig = out.tpi.sigs[m.sig];
          sig.push_back(mn.edges[j].action);
          grown.push_back(Member{mn.edges[j].child, fs.InternSig(sig),
                                 m.w * mn.chance[j]});
        }
      }
      f.members = std::move(grown);
    }

    const Node& rep = g.nodes[f.members.front().node];
    int32_t belief = fs.InternBelief(f.members);

    if (rep.terminal()) {
      for (const Member& m : f.members)
        TPIG_CHECK(g.nodes[m.node].terminal(), FoldNotApplicable,
                   "bundle mixes terminal and internal histories");
      Rat total = 0, value = 0;
      for (const Member& m : f.members) {
        total += m.w;
        value += m.w * g.team_value(m.node);
      }
      value /= total;
      NodeId n = out.Emit(f.parent, f.via, Player::Chance(),
                          f.members.front().node, belief);
      if (f.forced != kNoAction)
        out.SetForced(f.parent, f.forced, f.forced_sib);
      out.tpi.game.SetPayoffs(n, out.TerminalPayoffs(value));
      continue;
    }

    if (rep.player.is_chance()) {
      // Publicly branched chance: aggregate outcome probabilities over the
      // belief, weighting each member by its mass.
      std::vector<ActionId> order;
      std::map<ActionId, Rat> mass;
      std::map<ActionId, std::vector<Member>> next;
      Rat total = 0;
      for (const Member& m : f.members) {
        total += m.w;
        const Node& mn = g.nodes[m.node];
        for (int j = 0; j < mn.num_actions(); ++j) {
          if (mn.chance[j] == 0) continue;
          ActionId a = mn.edges[j].action;
          if (!mass.count(a)) order.push_back(a);
          mass[a] += m.w * mn.chance[j];
          next[a].push_back(
              Member{mn.edges[j].child, m.sig, m.w * mn.chance[j]});
        }
      }
      std::sort(order.begin(), order.end());
      NodeId n = out.Emit(f.parent, f.via, Player::Chance(),
                          f.members.front().node, belief);
      if (f.forced != kNoAction)
        out.SetForced(f.parent, f.forced, f.forced_sib);
      std::vector<Rat> probs;
      for (ActionId a : order) probs.push_back(mass[a] / total);
      for (auto it = order.rbegin(); it != order.rend(); ++it)
        todo.push_back({std::move(next[*it]), n, *it, kNoAction, -1, f.x});
      out.tpi.game.SetChance(n, std::move(probs));
      continue;
    }

    if (rep.player.is_opponent()) {
      NodeId n = out.Emit(f.parent, f.via, Player::Opponent(),
                          f.members.front().node, belief);
      if (f.forced != kNoAction)
        out.SetForced(f.parent, f.forced, f.forced_sib);
      for (const Member& m : f.members)
        TPIG_CHECK(g.nodes[m.node].num_actions() == rep.num_actions(),
                   FoldNotApplicable,
                   "bundle mixes distinct opponent infosets");
      for (int j = rep.num_actions() - 1; j >= 0; --j) {
        std::vector<Member> nm;
        for (const Member& m : f.members)
          nm.push_back(
              Member{g.nodes[m.node].edges[j].child, m.sig, m.w});
        todo.push_back(
            {std::move(nm), n, rep.edges[j].action, kNoAction, -1, f.x});
      }
      continue;
    }

    // Team decision bundle.
    for (const Member& m : f.members)
      TPIG_CHECK(g.nodes[m.node].player == rep.player, FoldNotApplicable,
                 "team-private information is not chance-sourced: bundle "
                 "mixes acting players");
    std::vector<ScopeEntry> support;
    int seat = rep.player.seat();
    for (const Member& m : f.members) {
      int32_t is = si.parts[seat]->node_to_set[m.node];
      ScopeEntry e = si.MakeEntry(seat, is);
      if (std::find(support.begin(), support.end(), e) == support.end())
        support.push_back(std::move(e));
    }
    std::sort(support.begin(), support.end(),
              [&](const ScopeEntry& a, const ScopeEntry& b) {
                const InfosetKey &ka = si.key_of(a), &kb = si.key_of(b);
                if (ka != kb) return ka < kb;
                return a.seat < b.seat;
              });
    std::vector<ScopeEntry> scope = ScopeAt(
        si, f.members.front().node, opts, fs.xp, f.x,
        opts.scope == ScopePolicy::kSupport ? &support : nullptr);

    NodeId n = out.Emit(f.parent, f.via, Player::Coordinator(),
                        f.members.front().node, belief);
    if (f.forced != kNoAction)
      out.SetForced(f.parent, f.forced, f.forced_sib);
    int32_t scope_id = out.InternScope(scope);
    out.tpi.scope_of[n] = scope_id;

    std::vector<int> member_pos(f.members.size(), -1);
    int64_t total_presc = 1;
    for (const ScopeEntry& e : scope) total_presc *= e.num_actions;
    TPIG_CHECK(total_presc <= (1 << 22), BudgetExceeded,
               "prescription fan-out too large");
    for (size_t mi = 0; mi < f.members.size(); ++mi) {
      int32_t is = si.parts[seat]->node_to_set[f.members[mi].node];
      for (size_t i = 0; i < scope.size(); ++i)
        if (scope[i].seat == seat &&
            scope[i].infoset == is)
          member_pos[mi] = static_cast<int>(i);
      TPIG_CHECK(member_pos[mi] >= 0, Error,
                 "support infoset missing from the prescription scope");
    }

    std::vector<int32_t> picks(scope.size(), 0);
    for (int64_t k = total_presc - 1; k >= 0; --k) {
      int64_t rem = k;
      for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i) {
        picks[i] = static_cast<int32_t>(rem % scope[i].num_actions);
        rem /= scope[i].num_actions;
      }
      ActionId ga = out.PrescriptionAction(scope_id, picks);
      // Distinct actions the prescription plays across the support.
      std::vector<ActionId> dist;
      std::map<ActionId, std::pair<std::vector<Member>, int32_t>> branch;
      for (size_t mi = 0; mi < f.members.size(); ++mi) {
        const Node& mn = g.nodes[f.members[mi].node];
        int sib = picks[member_pos[mi]];
        ActionId played = mn.edges[sib].action;
        if (!branch.count(played)) {
          dist.push_back(played);
          branch[played] = {{}, sib};
        }
        branch[played].first.push_back(
            Member{mn.edges[sib].child, f.members[mi].sig,
                   f.members[mi].w});
      }

      if (dist.size() == 1 && !opts.always_materialize_selector) {
        ActionId played = dist[0];
        int32_t bx = f.x;
        if (opts.scope == ScopePolicy::kExcludePlayed)
          for (size_t i = 0; i < scope.size(); ++i) {
            ActionId picked =
                g.nodes[si.rep_of(scope[i])].edges[picks[i]].action;
            if (picked != played)
              bx = fs.xp.Push(bx, scope[i].seat, scope[i].infoset);
          }
        todo.push_back({std::move(branch[played].first), n, ga, played,
                        branch[played].second, bx, {}, {}, {}});
      } else {
        // Defer to a selector frame so that the prescription edges of this
        // node are still created in enumeration order.
        std::vector<int32_t> pos(member_pos.begin(), member_pos.end());
        todo.push_back({f.members, n, ga, kNoAction, -1, f.x, picks,
                        std::move(pos), scope});
      }
    }
  }
  out.tpi.game.Freeze();
  return std::move(out.tpi);
}

}  // namespace

std::vector<ScopeEntry> EnumerateScope(
    const Vefg& g, NodeId node,
    const std::vector<std::pair<int32_t, InfosetKey>>& excluded,
    const ConvertOptions& opts) {
  SourceInfo si = AnalyzeSource(g);
  XPool xp;
  int32_t chain = -1;
  for (const auto& [seat, key] : excluded) {
    // Locate the infoset with this key in the seat's partition.
    const InfosetPartition& part = g.infosets(Player::Seat(seat));
    for (int32_t i = 0; i < static_cast<int32_t>(part.sets.size()); ++i)
      if (part.sets[i].key == key) {
        chain = xp.Push(chain, seat, i);
        break;
      }
  }
  ConvertOptions o = opts;
  if (!excluded.empty()) o.scope = ScopePolicy::kExcludePlayed;
  return ScopeAt(si, node, o, xp, chain, nullptr);
}

Tpi ConvertBasic(const Vefg& g, const ConvertOptions& opts) {
  ConvertOptions o = opts;
  o.scope = ScopePolicy::kPublicState;
  return ConvertTree(g, Repr::kBasic, o);
}

Tpi ConvertPruned(const Vefg& g, const ConvertOptions& opts) {
  ConvertOptions o = opts;
  o.scope = ScopePolicy::kExcludePlayed;
  return ConvertTree(g, Repr::kPruned, o);
}

Tpi ConvertFolded(const Vefg& g, const ConvertOptions& opts) {
  ConvertOptions o = opts;
  o.scope = ScopePolicy::kExcludePlayed;
  return ConvertFoldedImpl(g, o);
}

Tpi Convert(const Vefg& g, Repr repr, const ConvertOptions& opts) {
  switch (repr) {
    case Repr::kBasic: return ConvertBasic(g, opts);
    case Repr::kPruned: return ConvertPruned(g, opts);
    case Repr::kFolded: return ConvertFolded(g, opts);
    default:
      throw Error("Convert handles basic/pruned/folded only");
  }
}

}  // namespace tpig
