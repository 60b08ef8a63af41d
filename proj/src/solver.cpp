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

#include "tpig/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "tpig/evaluation.hpp"

namespace tpig {

BehavioralStrategy AverageStrategy(const RegretTable& table, Player owner) {
  BehavioralStrategy out;
  out.owner = owner;
  out.probs.resize(table.avg.size());
  for (size_t i = 0; i < table.avg.size(); ++i) {
    const auto& w = table.avg[i];
    double sum = 0;
    for (double v : w) sum += v;
    out.probs[i].resize(w.size());
    for (size_t k = 0; k < w.size(); ++k)
      out.probs[i][k] = sum > 0 ? w[k] / sum : 1.0 / w.size();
  }
  return out;
}

SolveView SolveView::Over(const Vefg& g) {
  TPIG_CHECK(g.num_seats == 1 && g.has_opponent && !g.has_coordinator,
             NotTwoPlayerZeroSum,
             "direct solving needs one team seat against the opponent");
  TPIG_CHECK(Validate(g).zero_sum_ok, NotTwoPlayerZeroSum,
             "payoffs are not zero-sum");
  SolveView v;
  v.g = &g;
  v.players[0] = Player::Seat(0);
  v.players[1] = Player::Opponent();
  v.parts[0] = &g.infosets(Player::Seat(0));
  v.parts[1] = &g.infosets(Player::Opponent());
  return v;
}

SolveView SolveView::Over(const Tpi& tpi) {
  TPIG_CHECK(tpi.game.has_opponent, NotTwoPlayerZeroSum,
             "converted game has no opponent side");
  SolveView v;
  v.g = &tpi.game;
  v.players[0] = Player::Coordinator();
  v.players[1] = Player::Opponent();
  v.parts[0] = &tpi.coordinator_infosets();
  v.parts[1] = &tpi.opponent_infosets();
  v.lift0 = (tpi.tag == Repr::kFoldedIR || tpi.tag == Repr::kFoldedLossy)
                ? &tpi.coordinator_infosets_pr()
                : nullptr;
  return v;
}

namespace {

// Flattened double-precision arena for the solver inner loops.
struct Flat {
  enum Kind : int8_t { kSide0, kSide1, kChance, kTerminal };
  struct FNode {
    Kind kind;
    int32_t iset = -1;
    int32_t begin = 0, end = 0;  // edge range
    double value = 0;            // side-0 payoff at terminals
  };
  std::vector<FNode> nodes;
  std::vector<int32_t> child;
  std::vector<double> prob;  // aligned with child; 1.0 outside chance

  static Flat Build(const SolveView& view) {
    const Vefg& g = *view.g;
    Flat f;
    f.nodes.resize(g.nodes.size());
    for (NodeId n = 0; n < static_cast<NodeId>(g.nodes.size()); ++n) {
      const Node& node = g.nodes[n];
      FNode& fn = f.nodes[n];
      fn.begin = static_cast<int32_t>(f.child.size());
      for (int k = 0; k < node.num_actions(); ++k) {
        f.child.push_back(node.edges[k].child);
        f.prob.push_back(node.player.is_chance() && !node.terminal()
                             ? ToDouble(node.chance[k])
                             : 1.0);
      }
      fn.end = static_cast<int32_t>(f.child.size());
      if (node.terminal()) {
        fn.kind = kTerminal;
        fn.value = ToDouble(g.team_value(n));
      } else if (node.player == view.players[0]) {
        fn.kind = kSide0;
        fn.iset = view.parts[0]->node_to_set[n];
      } else if (node.player == view.players[1]) {
        fn.kind = kSide1;
        fn.iset = view.parts[1]->node_to_set[n];
      } else {
        fn.kind = kChance;
      }
    }
    return f;
  }
};

RegretTable MakeTable(const InfosetPartition& part) {
  RegretTable t;
  t.regrets.resize(part.sets.size());
  t.avg.resize(part.sets.size());
  for (size_t i = 0; i < part.sets.size(); ++i) {
    t.regrets[i].assign(part.sets[i].num_actions, 0.0);
    t.avg[i].assign(part.sets[i].num_actions, 0.0);
  }
  return t;
}

void Matched(const std::vector<double>& regrets, std::vector<double>& out) {
  double sum = 0;
  for (double r : regrets)
    if (r > 0) sum += r;
  out.resize(regrets.size());
  if (sum <= 0) {
    std::fill(out.begin(), out.end(), 1.0 / regrets.size());
  } else {
    for (size_t k = 0; k < regrets.size(); ++k)
      out[k] = regrets[k] > 0 ? regrets[k] / sum : 0.0;
  }
}

struct Logger {
  const SolveView& view;
  const SolveOptions& opts;
  RegretTable* tables[2];
  std::vector<CurvePoint> curve;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  double Exploit() {
    BehavioralStrategy s0 = AverageStrategy(*tables[0], view.players[0]);
    BehavioralStrategy s1 = AverageStrategy(*tables[1], view.players[1]);
    PolicyFn pol0 = PolicyOver(*view.parts[0], s0);
    PolicyFn pol1 = PolicyOver(*view.parts[1], s1);
    double br1 =
        BestResponse(*view.g, view.players[1], *view.parts[1], pol0).value;
    const InfosetPartition& responder0 =
        view.lift0 ? *view.lift0 : *view.parts[0];
    double br0 =
        BestResponse(*view.g, view.players[0], responder0, pol1).value;
    return br0 + br1;
  }

  // Returns true when the early-stop target has been reached.
  bool Sample(int64_t iteration) {
    double e = Exploit();
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    curve.push_back({iteration, secs, e});
    return opts.target_exploitability > 0 &&
           e < opts.target_exploitability;
  }
};

SolveResult Finish(const SolveView& view, Logger& logger, int64_t iters) {
  SolveResult res;
  res.strategy[0] = AverageStrategy(*logger.tables[0], view.players[0]);
  res.strategy[1] = AverageStrategy(*logger.tables[1], view.players[1]);
  res.curve = std::move(logger.curve);
  res.iterations_run = iters;
  std::vector<PolicyFn> pols(view.g->num_observers());
  pols[view.g->observer_row(view.players[0])] =
      PolicyOver(*view.parts[0], res.strategy[0]);
  pols[view.g->observer_row(view.players[1])] =
      PolicyOver(*view.parts[1], res.strategy[1]);
  std::vector<Rat> values = ExpectedValues(*view.g, pols);
  Rat team = 0;
  for (int i = 0; i < view.g->num_seats; ++i) team += values[i];
  if (view.g->has_coordinator)
    team += values[view.g->observer_row(Player::Coordinator())];
  res.game_value = ToDouble(team);
  return res;
}

}  // namespace

SolveResult CfrPlusSolve(const SolveView& view, const SolveOptions& opts) {
  Flat flat = Flat::Build(view);
  RegretTable tables[2] = {MakeTable(*view.parts[0]),
                           MakeTable(*view.parts[1])};
  Logger logger{view, opts, {&tables[0], &tables[1]}, {}, {}};

  std::vector<double> sigma;
  // Counterfactual walk for the updating side; linear averaging.
  auto walk = [&](auto&& self, int32_t n, int up, double reach_me,
                  double reach_other, double weight) -> double {
    const Flat::FNode& fn = flat.nodes[n];
    if (fn.kind == Flat::kTerminal)
      return up == 0 ? fn.value : -fn.value;
    if (fn.kind == Flat::kChance) {
      double v = 0;
      for (int32_t e = fn.begin; e < fn.end; ++e) {
        if (flat.prob[e] == 0) continue;
        v += flat.prob[e] * self(self, flat.child[e], up, reach_me,
                                 reach_other * flat.prob[e], weight);
      }
      return v;
    }
    int side = fn.kind == Flat::kSide0 ? 0 : 1;
    RegretTable& table = tables[side];
    int arity = fn.end - fn.begin;
    Matched(table.regrets[fn.iset], sigma);
    if (side != up) {
      double v = 0;
      std::vector<double> local(sigma);
      for (int k = 0; k < arity; ++k) {
        if (local[k] == 0) continue;
        v += local[k] * self(self, flat.child[fn.begin + k], up, reach_me,
                             reach_other * local[k], weight);
      }
      return v;
    }
    std::vector<double> local(sigma);
    std::vector<double> vals(arity);
    double v = 0;
    for (int k = 0; k < arity; ++k) {
      vals[k] = self(self, flat.child[fn.begin + k], up, reach_me * local[k],
                     reach_other, weight);
      v += local[k] * vals[k];
    }
    auto& reg = table.regrets[fn.iset];
    auto& avg = table.avg[fn.iset];
    for (int k = 0; k < arity; ++k) {
      reg[k] = std::max(0.0, reg[k] + reach_other * (vals[k] - v));
      avg[k] += weight * reach_me * local[k];
    }
    return v;
  };

  int64_t t = 0;
  for (t = 1; t <= opts.iterations; ++t) {
    for (int up = 0; up < 2; ++up)
      walk(walk, 0, up, 1.0, 1.0, static_cast<double>(t));
    tables[0].iterations = tables[1].iterations = t;
    bool last = t == opts.iterations;
    if ((opts.eval_every > 0 && t % opts.eval_every == 0) || last) {
      if (logger.Sample(t)) break;
    }
  }
  if (logger.curve.empty()) logger.Sample(std::min(t, opts.iterations));
  return Finish(view, logger, std::min(t, opts.iterations));
}

SolveResult OsMcCfrSolve(const SolveView& view, const SolveOptions& opts) {
  Flat flat = Flat::Build(view);
  RegretTable tables[2] = {MakeTable(*view.parts[0]),
                           MakeTable(*view.parts[1])};
  Logger logger{view, opts, {&tables[0], &tables[1]}, {}, {}};
  std::mt19937_64 rng(opts.seed);
  auto uniform = [&]() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  };

  struct Step {
    int32_t iset;
    int side;
    int sampled;
    double sigma_a;
    double reach_other;   // at the node, others' play probability
    double reach_me;      // updating player's own reach at the node
    double sample_prefix; // sampling probability of reaching the node
    int arity;
  };
  std::vector<Step> path;
  std::vector<double> sigma;

  for (int64_t t = 1; t <= opts.iterations; ++t) {
    for (int up = 0; up < 2; ++up) {
      path.clear();
      int32_t n = 0;
      double reach_me = 1, reach_other = 1, reach_them_own = 1, sample = 1;
      double terminal_value = 0;
      for (;;) {
        const Flat::FNode& fn = flat.nodes[n];
        if (fn.kind == Flat::kTerminal) {
          terminal_value = up == 0 ? fn.value : -fn.value;
          break;
        }
        int arity = fn.end - fn.begin;
        if (fn.kind == Flat::kChance) {
          double r = uniform(), acc = 0;
          int pick = arity - 1;
          for (int k = 0; k < arity; ++k) {
            acc += flat.prob[fn.begin + k];
            if (r < acc) {
              pick = k;
              break;
            }
          }
          double p = flat.prob[fn.begin + pick];
          reach_other *= p;
          sample *= p;
          n = flat.child[fn.begin + pick];
          continue;
        }
        int side = fn.kind == Flat::kSide0 ? 0 : 1;
        Matched(tables[side].regrets[fn.iset], sigma);
        double q, picked_sigma;
        int pick;
        if (side == up) {
          double r = uniform(), acc = 0;
          pick = arity - 1;
          for (int k = 0; k < arity; ++k) {
            double qk = opts.exploration / arity +
                        (1 - opts.exploration) * sigma[k];
            acc += qk;
            if (r < acc) {
              pick = k;
              break;
            }
          }
          q = opts.exploration / arity +
              (1 - opts.exploration) * sigma[pick];
          picked_sigma = sigma[pick];
          path.push_back({fn.iset, side, pick, picked_sigma, reach_other,
                          reach_me, sample, arity});
          reach_me *= picked_sigma;
        } else {
          double r = uniform(), acc = 0;
          pick = arity - 1;
          for (int k = 0; k < arity; ++k) {
            acc += sigma[k];
            if (r < acc) {
              pick = k;
              break;
            }
          }
          q = sigma[pick];
          picked_sigma = sigma[pick];
          // Average strategy accumulates for the non-updating side, with
          // the sampling correction.
          auto& avg = tables[side].avg[fn.iset];
          for (int k = 0; k < arity; ++k)
            avg[k] += static_cast<double>(t) * reach_them_own * sigma[k] /
                      sample;
          reach_other *= picked_sigma;
          reach_them_own *= picked_sigma;
        }
        sample *= q;
        n = flat.child[fn.begin + pick];
      }
      // Backward regret updates for the updating player.
      double tail = 1.0;
      double w = terminal_value / sample;
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        auto& reg = tables[up].regrets[it->iset];
        double wh = w * it->reach_other;
        for (int k = 0; k < it->arity; ++k) {
          if (k == it->sampled)
            reg[k] += wh * tail * (1 - it->sigma_a);
          else
            reg[k] -= wh * tail * it->sigma_a;
        }
        tail *= it->sigma_a;
      }
    }
    tables[0].iterations = tables[1].iterations = t;
    bool last = t == opts.iterations;
    if ((opts.eval_every > 0 && t % opts.eval_every == 0) || last) {
      if (logger.Sample(t)) break;
    }
  }
  return Finish(view, logger, opts.iterations);
}

}  // namespace tpig
