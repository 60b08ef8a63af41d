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

#include "tpig/evaluation.hpp"

#include <algorithm>
#include <map>

namespace tpig {

namespace {

bool IsFillerNode(const Vefg& g, NodeId n) {
  const Node& node = g.nodes[n];
  return !node.terminal() && node.num_actions() == 1 &&
         g.actions[node.edges[0].action].dummy;
}

int NonDummyActions(const Vefg& g, const Infoset& is) {
  int count = 0;
  for (const Edge& e : g.nodes[is.nodes[0]].edges)
    if (!g.actions[e.action].dummy) ++count;
  return count;
}

void AccumulateSide(const Vefg& g, const InfosetPartition& part,
                    int64_t& infosets, int64_t& actions) {
  for (const Infoset& is : part.sets) {
    int a = NonDummyActions(g, is);
    if (a == 0) continue;  // turn-taking filler only
    ++infosets;
    actions += a;
  }
}

TreeStats CountNodes(const Vefg& g, bool include_dummy) {
  TreeStats st;
  for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) {
    if (!include_dummy && IsFillerNode(g, n)) continue;
    ++st.nodes;
    if (g.nodes[n].terminal()) ++st.terminals;
  }
  return st;
}

}  // namespace

TreeStats TreeStatsOf(const Vefg& g, bool include_dummy) {
  TreeStats st = CountNodes(g, include_dummy);
  for (int s = 0; s < g.num_seats; ++s)
    AccumulateSide(g, g.infosets(Player::Seat(s)), st.team_infosets,
                   st.team_actions);
  if (g.has_coordinator)
    AccumulateSide(g, g.infosets(Player::Coordinator()), st.team_infosets,
                   st.team_actions);
  if (g.has_opponent)
    AccumulateSide(g, g.infosets(Player::Opponent()), st.adv_infosets,
                   st.adv_actions);
  st.team_sequences = st.team_actions + 1;
  st.adv_sequences = st.adv_actions + 1;
  return st;
}

TreeStats TreeStatsOf(const Tpi& tpi, bool include_dummy) {
  TreeStats st = CountNodes(tpi.game, include_dummy);
  AccumulateSide(tpi.game, tpi.coordinator_infosets(), st.team_infosets,
                 st.team_actions);
  if (tpi.game.has_opponent)
    AccumulateSide(tpi.game, tpi.opponent_infosets(), st.adv_infosets,
                   st.adv_actions);
  st.team_sequences = st.team_actions + 1;
  st.adv_sequences = st.adv_actions + 1;
  return st;
}

PolicyFn PolicyOver(const InfosetPartition& part,
                    const BehavioralStrategy& strategy) {
  const InfosetPartition* p = &part;
  const BehavioralStrategy* s = &strategy;
  return [p, s](NodeId n) -> const std::vector<double>* {
    int32_t i = p->node_to_set[n];
    TPIG_CHECK(i >= 0 && i < static_cast<int32_t>(s->probs.size()),
               MissingInfosetPolicy,
               "strategy does not cover node " + std::to_string(n));
    return &s->probs[i];
  };
}

std::vector<Rat> ExpectedValues(
    const Vefg& g, const std::vector<PolicyFn>& by_observer_row) {
  int rows = g.num_observers();
  std::vector<Rat> out(rows, Rat(0));
  struct Item {
    NodeId node;
    Rat reach;
  };
  std::vector<Item> stack{{0, Rat(1)}};
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    const Node& n = g.nodes[it.node];
    if (n.terminal()) {
      for (int r = 0; r < rows; ++r)
        if (r < static_cast<int>(n.payoffs.size()))
          out[r] += it.reach * n.payoffs[r];
      continue;
    }
    if (n.player.is_chance()) {
      for (int k = 0; k < n.num_actions(); ++k) {
        if (n.chance[k] == 0) continue;
        stack.push_back({n.edges[k].child, it.reach * n.chance[k]});
      }
      continue;
    }
    int row = g.observer_row(n.player);
    const std::vector<double>* probs = by_observer_row[row](it.node);
    TPIG_CHECK(probs && static_cast<int>(probs->size()) == n.num_actions(),
               MissingInfosetPolicy, "policy arity mismatch");
    for (int k = 0; k < n.num_actions(); ++k) {
      if ((*probs)[k] == 0) continue;
      stack.push_back({n.edges[k].child, it.reach * Rat((*probs)[k])});
    }
  }
  return out;
}

std::vector<Rat> ExpectedValuesPure(const Vefg& g, const JointPlan& team,
                                    const std::vector<int32_t>& opponent) {
  int rows = g.num_observers();
  std::vector<Rat> out(rows, Rat(0));
  struct Item {
    NodeId node;
    Rat reach;
  };
  std::vector<Item> stack{{0, Rat(1)}};
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    const Node& n = g.nodes[it.node];
    if (n.terminal()) {
      for (int r = 0; r < rows; ++r)
        if (r < static_cast<int>(n.payoffs.size()))
          out[r] += it.reach * n.payoffs[r];
      continue;
    }
    if (n.player.is_chance()) {
      for (int k = 0; k < n.num_actions(); ++k) {
        if (n.chance[k] == 0) continue;
        stack.push_back({n.edges[k].child, it.reach * n.chance[k]});
      }
      continue;
    }
    int32_t pick;
    if (n.player.is_opponent()) {
      int32_t i = g.infosets(Player::Opponent()).node_to_set[it.node];
      TPIG_CHECK(i >= 0 && i < static_cast<int32_t>(opponent.size()) &&
                     opponent[i] >= 0,
                 MissingInfosetPolicy, "opponent plan incomplete");
      pick = opponent[i];
    } else {
      int seat = n.player.seat();
      int32_t i = g.infosets(n.player).node_to_set[it.node];
      TPIG_CHECK(seat < static_cast<int>(team.picks.size()) && i >= 0 &&
                     i < static_cast<int32_t>(team.picks[seat].size()) &&
                     team.picks[seat][i] >= 0,
                 MissingInfosetPolicy, "team plan incomplete at a reached "
                 "infoset");
      pick = team.picks[seat][i];
    }
    stack.push_back({n.edges[pick].child, it.reach});
  }
  return out;
}

namespace {

void RequirePerfectRecall(const Vefg& g, Player p,
                          const InfosetPartition& part) {
  for (const Infoset& is : part.sets) {
    std::vector<std::pair<int32_t, int32_t>> ref;
    bool have = false;
    for (NodeId nid : is.nodes) {
      TPIG_CHECK(g.nodes[nid].num_actions() == is.num_actions,
                 ImperfectRecallResponder,
                 "responder infoset mixes action counts");
      std::vector<std::pair<int32_t, int32_t>> own;
      for (NodeId cur = nid; g.nodes[cur].parent != kNoNode;) {
        NodeId par = g.nodes[cur].parent;
        if (g.nodes[par].player == p)
          own.emplace_back(part.node_to_set[par], g.nodes[cur].parent_edge);
        cur = par;
      }
      std::reverse(own.begin(), own.end());
      if (!have) {
        ref = own;
        have = true;
      } else {
        TPIG_CHECK(own == ref, ImperfectRecallResponder,
                   "responder has imperfect recall in this representation; "
                   "lift to the folded game first");
      }
    }
  }
}

double SideValue(const Vefg& g, NodeId z, bool team_side) {
  double v = ToDouble(g.team_value(z));
  return team_side ? v : -v;
}

}  // namespace

BestResponseResult BestResponse(const Vefg& g, Player responder,
                                const InfosetPartition& part,
                                const PolicyFn& others) {
  RequirePerfectRecall(g, responder, part);
  bool team_side = responder.team_side();
  size_t num_nodes = g.nodes.size();

  // Reach of everyone but the responder.
  std::vector<double> reach(num_nodes, 0.0);
  reach[0] = 1.0;
  for (NodeId n = 0; n < static_cast<NodeId>(num_nodes); ++n) {
    const Node& node = g.nodes[n];
    if (node.terminal()) continue;
    const std::vector<double>* probs = nullptr;
    if (!node.player.is_chance() && node.player != responder)
      probs = others(n);
    for (int k = 0; k < node.num_actions(); ++k) {
      double p = 1.0;
      if (node.player.is_chance())
        p = ToDouble(node.chance[k]);
      else if (probs)
        p = (*probs)[k];
      reach[node.edges[k].child] = reach[n] * p;
    }
  }

  // Dependency order: an infoset is decided only after every responder
  // infoset below it.
  int m = static_cast<int>(part.sets.size());
  std::vector<std::vector<int32_t>> children(m);
  std::vector<int32_t> indegree(m, 0);
  for (NodeId n = 0; n < static_cast<NodeId>(num_nodes); ++n) {
    if (part.node_to_set[n] < 0) continue;
    NodeId cur = g.nodes[n].parent;
    while (cur != kNoNode && part.node_to_set[cur] < 0)
      cur = g.nodes[cur].parent;
    if (cur != kNoNode) {
      children[part.node_to_set[cur]].push_back(part.node_to_set[n]);
      ++indegree[part.node_to_set[n]];
    }
  }
  std::vector<int32_t> order;
  std::vector<int32_t> roots;
  for (int32_t i = 0; i < m; ++i)
    if (indegree[i] == 0) roots.push_back(i);
  while (!roots.empty()) {
    int32_t i = roots.back();
    roots.pop_back();
    order.push_back(i);
    for (int32_t c : children[i])
      if (--indegree[c] == 0) roots.push_back(c);
  }
  TPIG_CHECK(static_cast<int>(order.size()) == m, ImperfectRecallResponder,
             "cyclic infoset dependencies");

  std::vector<int32_t> br(m, -1);
  std::vector<double> node_value(num_nodes, 0.0);
  std::vector<uint8_t> done(num_nodes, 0);

  // Subtree value assuming deeper responder infosets already decided.
  auto eval = [&](NodeId start, auto&& self) -> double {
    if (done[start]) return node_value[start];
    const Node& node = g.nodes[start];
    double v = 0;
    if (node.terminal()) {
      v = SideValue(g, start, team_side);
    } else if (node.player == responder) {
      int32_t i = part.node_to_set[start];
      TPIG_CHECK(br[i] >= 0, Error, "best response order violated");
      v = self(node.edges[br[i]].child, self);
    } else {
      const std::vector<double>* probs =
          node.player.is_chance() ? nullptr : others(start);
      for (int k = 0; k < node.num_actions(); ++k) {
        double p = node.player.is_chance() ? ToDouble(node.chance[k])
                                           : (*probs)[k];
        if (p == 0) continue;
        v += p * self(node.edges[k].child, self);
      }
    }
    done[start] = 1;
    node_value[start] = v;
    return v;
  };

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Infoset& is = part.sets[*it];
    int best = 0;
    double best_v = -1e300;
    for (int k = 0; k < is.num_actions; ++k) {
      double cfv = 0;
      for (NodeId nid : is.nodes)
        cfv += reach[nid] * eval(g.nodes[nid].edges[k].child, eval);
      if (cfv > best_v + 1e-15) {
        best_v = cfv;
        best = k;
      }
    }
    br[*it] = best;
  }
  // Final pass with all decisions fixed.
  std::fill(done.begin(), done.end(), 0);
  double value = eval(0, eval);
  return BestResponseResult{value, std::move(br)};
}

double Exploitability(const SolveView& view, const BehavioralStrategy& s0,
                      const BehavioralStrategy& s1) {
  PolicyFn pol0 = PolicyOver(*view.parts[0], s0);
  PolicyFn pol1 = PolicyOver(*view.parts[1], s1);
  double br1 =
      BestResponse(*view.g, view.players[1], *view.parts[1], pol0).value;
  double br0 =
      BestResponse(*view.g, view.players[0], *view.parts[0], pol1).value;
  return br0 + br1;
}

double ExploitabilityLifted(const Tpi& tpi, const BehavioralStrategy& s0,
                            const BehavioralStrategy& s1) {
  const Vefg& g = tpi.game;
  PolicyFn pol0 = PolicyOver(tpi.coordinator_infosets(), s0);
  PolicyFn pol1 = PolicyOver(tpi.opponent_infosets(), s1);
  double br1 =
      BestResponse(g, Player::Opponent(), tpi.opponent_infosets(), pol0)
          .value;
  double br0 = BestResponse(g, Player::Coordinator(),
                            tpi.coordinator_infosets_pr(), pol1)
                   .value;
  return br0 + br1;
}

namespace {

int EdgeWithAction(const Node& n, ActionId a) {
  for (int k = 0; k < n.num_actions(); ++k)
    if (n.edges[k].action == a) return k;
  return -1;
}

}  // namespace

CoordinatorPlan MapRho(const Vefg& source, const JointPlan& team,
                       const Tpi& tpi) {
  TPIG_CHECK(tpi.has_provenance(), ProvenanceMissing,
             "conversion lacks provenance");
  TPIG_CHECK(tpi.tag != Repr::kFoldedLossy, PreconditionFailed,
             "plan maps need the unfiltered prescription set");
  const Vefg& g = tpi.game;
  const InfosetPartition& cpart = tpi.coordinator_infosets_pr();
  CoordinatorPlan plan(cpart.sets.size(), -1);

  struct Item {
    NodeId s, t;
  };
  std::vector<Item> stack{{0, 0}};
  while (!stack.empty()) {
    auto [s, t] = stack.back();
    stack.pop_back();
    const Node& sn = source.nodes[s];
    const Node& tn = g.nodes[t];
    if (tn.terminal()) continue;
    if (tn.player.is_coordinator()) {
      const auto& scope = tpi.scopes[tpi.scope_of[t]];
      int64_t k = 0;
      for (const ScopeEntry& e : scope) {
        int32_t pick = team.picks[e.seat][e.infoset];
        if (pick < 0) pick = 0;  // canonical completion off the plan's path
        k = k * e.num_actions + pick;
      }
      int32_t ci = cpart.node_to_set[t];
      TPIG_CHECK(plan[ci] < 0 || plan[ci] == static_cast<int32_t>(k), Error,
                 "inconsistent prescription for one coordinator infoset");
      plan[ci] = static_cast<int32_t>(k);
      // The play follows the acting seat's own pick.
      int seat = sn.player.seat();
      int32_t own = source.infosets(sn.player).node_to_set[s];
      int32_t own_pick = team.picks[seat][own];
      TPIG_CHECK(own_pick >= 0, MissingInfosetPolicy,
                 "team plan unassigned at a reached infoset");
      ActionId played = sn.edges[own_pick].action;
      const Edge& te = tn.edges[k];
      if (te.forced != kNoAction) {
        TPIG_CHECK(te.forced == played, Error, "forced action mismatch");
        stack.push_back({sn.edges[own_pick].child, te.child});
      } else {
        // Folded selector: follow the branch replaying the true action.
        const Node& sel = g.nodes[te.child];
        int bk = EdgeWithAction(sel, played);
        TPIG_CHECK(bk >= 0, Error, "selector lacks the played action");
        stack.push_back({sn.edges[own_pick].child, sel.edges[bk].child});
      }
      continue;
    }
    // Opponent or chance: pair children by action identity.
    for (int k = 0; k < sn.num_actions(); ++k) {
      if (sn.player.is_chance() && sn.chance[k] == 0) continue;
      int tk = EdgeWithAction(tn, sn.edges[k].action);
      TPIG_CHECK(tk >= 0, Error, "conversion lacks a source branch");
      stack.push_back({sn.edges[k].child, tn.edges[tk].child});
    }
  }
  return plan;
}

JointPlan MapSigma(const Tpi& tpi, const CoordinatorPlan& plan,
                   const Vefg& source) {
  TPIG_CHECK(tpi.has_provenance(), ProvenanceMissing,
             "conversion lacks provenance");
  const Vefg& g = tpi.game;
  const InfosetPartition& cpart = tpi.coordinator_infosets_pr();
  JointPlan team;
  team.picks.resize(source.num_seats);
  for (int s = 0; s < source.num_seats; ++s)
    team.picks[s].assign(source.infosets(Player::Seat(s)).sets.size(), -1);

  struct Item {
    NodeId s, t;
  };
  std::vector<Item> stack{{0, 0}};
  while (!stack.empty()) {
    auto [s, t] = stack.back();
    stack.pop_back();
    const Node& sn = source.nodes[s];
    const Node& tn = g.nodes[t];
    if (tn.terminal()) continue;
    if (tn.player.is_coordinator()) {
      int32_t ci = cpart.node_to_set[t];
      int32_t k = plan[ci];
      TPIG_CHECK(k >= 0 && k < tn.num_actions(), MissingInfosetPolicy,
                 "coordinator plan unassigned at a reached infoset");
      const auto& scope = tpi.scopes[tpi.scope_of[t]];
      const auto& picks = tpi.DecodePrescription(t, k);
      int seat = sn.player.seat();
      int32_t own = source.infosets(sn.player).node_to_set[s];
      int own_pos = -1;
      for (size_t i = 0; i < scope.size(); ++i)
        if (scope[i].seat == seat && scope[i].infoset == own)
          own_pos = static_cast<int>(i);
      TPIG_CHECK(own_pos >= 0, Error, "acting infoset outside the scope");
      int32_t pick = picks[own_pos];
      int32_t& slot = team.picks[seat][own];
      TPIG_CHECK(slot < 0 || slot == pick, Error,
                 "conflicting prescriptions for one team infoset");
      slot = pick;
      ActionId played = sn.edges[pick].action;
      const Edge& te = tn.edges[k];
      if (te.forced != kNoAction) {
        TPIG_CHECK(te.forced == played, Error, "forced action mismatch");
        stack.push_back({sn.edges[pick].child, te.child});
      } else {
        const Node& sel = g.nodes[te.child];
        int bk = EdgeWithAction(sel, played);
        TPIG_CHECK(bk >= 0, Error, "selector lacks the played action");
        stack.push_back({sn.edges[pick].child, sel.edges[bk].child});
      }
      continue;
    }
    for (int k = 0; k < sn.num_actions(); ++k) {
      if (sn.player.is_chance() && sn.chance[k] == 0) continue;
      int tk = EdgeWithAction(tn, sn.edges[k].action);
      TPIG_CHECK(tk >= 0, Error, "conversion lacks a source branch");
      stack.push_back({sn.edges[k].child, tn.edges[tk].child});
    }
  }
  return team;
}

std::vector<std::vector<int32_t>> EnumerateReducedPlans(const Vefg& g,
                                                        Player p) {
  const InfosetPartition& part = g.infosets(p);
  std::vector<std::vector<int32_t>> out;
  std::vector<int32_t> plan(part.sets.size(), -1);

  auto reachable_unassigned = [&]() -> int32_t {
    int32_t found = -1;
    std::vector<NodeId> stack{0};
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      const Node& node = g.nodes[n];
      if (node.terminal()) continue;
      if (node.player == p) {
        int32_t i = part.node_to_set[n];
        if (plan[i] < 0) {
          if (found < 0 || i < found) found = i;
          continue;  // deeper infosets open up once this one is assigned
        }
        stack.push_back(node.edges[plan[i]].child);
        continue;
      }
      for (const Edge& e : node.edges) stack.push_back(e.child);
    }
    return found;
  };

  auto rec = [&](auto&& self) -> void {
    int32_t i = reachable_unassigned();
    if (i < 0) {
      out.push_back(plan);
      return;
    }
    for (int k = 0; k < part.sets[i].num_actions; ++k) {
      plan[i] = k;
      self(self);
    }
    plan[i] = -1;
  };
  rec(rec);
  return out;
}

OracleResult TmecorBruteforce(const Vefg& g, int64_t plan_budget,
                              double gap_tolerance, int64_t max_iterations) {
  std::vector<std::vector<std::vector<int32_t>>> seat_plans;
  int64_t joint = 1;
  for (int s = 0; s < g.num_seats; ++s) {
    seat_plans.push_back(EnumerateReducedPlans(g, Player::Seat(s)));
    joint *= static_cast<int64_t>(seat_plans.back().size());
    TPIG_CHECK(joint <= plan_budget, BudgetExceeded,
               "joint plan count exceeds the oracle budget");
  }
  std::vector<std::vector<int32_t>> opp_plans;
  if (g.has_opponent) {
    opp_plans = EnumerateReducedPlans(g, Player::Opponent());
    TPIG_CHECK(static_cast<int64_t>(opp_plans.size()) <= plan_budget,
               BudgetExceeded, "opponent plan count exceeds the budget");
  } else {
    opp_plans.push_back({});
  }

  std::vector<JointPlan> joints;
  joints.reserve(joint);
  std::vector<int32_t> idx(g.num_seats, 0);
  for (;;) {
    JointPlan jp;
    for (int s = 0; s < g.num_seats; ++s)
      jp.picks.push_back(seat_plans[s][idx[s]]);
    joints.push_back(std::move(jp));
    int s = g.num_seats - 1;
    while (s >= 0 && ++idx[s] == static_cast<int32_t>(seat_plans[s].size())) {
      idx[s] = 0;
      --s;
    }
    if (s < 0) break;
  }

  size_t rows = joints.size(), cols = opp_plans.size();
  std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) {
      std::vector<Rat> vals = ExpectedValuesPure(g, joints[r], opp_plans[c]);
      Rat team = 0;
      for (int s = 0; s < g.num_seats; ++s) team += vals[s];
      a[r][c] = ToDouble(team);
    }

  // Regret matching for both sides on the bimatrix.
  std::vector<double> rr(rows, 0.0), rc(cols, 0.0);
  std::vector<double> xs(rows, 0.0), ys(cols, 0.0);
  std::vector<double> x(rows), y(cols);
  auto match = [](const std::vector<double>& reg, std::vector<double>& out) {
    double sum = 0;
    for (double v : reg)
      if (v > 0) sum += v;
    if (sum <= 0) {
      std::fill(out.begin(), out.end(), 1.0 / out.size());
    } else {
      for (size_t i = 0; i < reg.size(); ++i)
        out[i] = reg[i] > 0 ? reg[i] / sum : 0.0;
    }
  };
  OracleResult res;
  res.gap = 1e300;
  for (int64_t it = 1; it <= max_iterations; ++it) {
    match(rr, x);
    match(rc, y);
    std::vector<double> ay(rows, 0.0), xa(cols, 0.0);
    for (size_t r = 0; r < rows; ++r)
      for (size_t c = 0; c < cols; ++c) {
        ay[r] += a[r][c] * y[c];
        xa[c] += a[r][c] * x[r];
      }
    double u = 0;
    for (size_t r = 0; r < rows; ++r) u += x[r] * ay[r];
    for (size_t r = 0; r < rows; ++r) rr[r] += ay[r] - u;
    for (size_t c = 0; c < cols; ++c) rc[c] += u - xa[c];
    for (size_t r = 0; r < rows; ++r) xs[r] += x[r];
    for (size_t c = 0; c < cols; ++c) ys[c] += y[c];

    if (it % 64 == 0 || it == max_iterations) {
      std::vector<double> xbar = xs, ybar = ys;
      for (double& v : xbar) v /= static_cast<double>(it);
      for (double& v : ybar) v /= static_cast<double>(it);
      double best_row = -1e300, worst_col = 1e300;
      std::vector<double> ayb(rows, 0.0), xab(cols, 0.0);
      for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) {
          ayb[r] += a[r][c] * ybar[c];
          xab[c] += a[r][c] * xbar[r];
        }
      for (size_t r = 0; r < rows; ++r) best_row = std::max(best_row, ayb[r]);
      for (size_t c = 0; c < cols; ++c) worst_col = std::min(worst_col, xab[c]);
      res.gap = best_row - worst_col;
      res.value = (best_row + worst_col) / 2;
      res.team_distribution = xbar;
      if (res.gap <= gap_tolerance) break;
    }
  }
  res.joint_plans = std::move(joints);
  return res;
}

}  // namespace tpig
