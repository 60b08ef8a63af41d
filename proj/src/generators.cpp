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

#include "tpig/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace tpig {

std::string PokerParams::name() const {
  std::string s = std::to_string(team_size) + std::to_string(adversary_count);
  if (leduc)
    s += "L" + std::to_string(max_bets) + std::to_string(ranks) +
         std::to_string(suits);
  else
    s += "K" + std::to_string(ranks);
  return s;
}

std::optional<PokerParams> ParseInstanceName(const std::string& name) {
  if (name.size() < 4) return std::nullopt;
  if (!isdigit(static_cast<unsigned char>(name[0])) ||
      !isdigit(static_cast<unsigned char>(name[1])))
    return std::nullopt;
  PokerParams p;
  p.team_size = name[0] - '0';
  p.adversary_count = name[1] - '0';
  char kind = name[2];
  std::string rest = name.substr(3);
  if (kind == 'K') {
    p.leduc = false;
    if (rest.empty() ||
        !std::all_of(rest.begin(), rest.end(),
                     [](char c) { return isdigit(static_cast<unsigned char>(c)); }))
      return std::nullopt;
    p.ranks = std::stoi(rest);
  } else if (kind == 'L') {
    p.leduc = true;
    if (rest.size() != 3 ||
        !std::all_of(rest.begin(), rest.end(),
                     [](char c) { return isdigit(static_cast<unsigned char>(c)); }))
      return std::nullopt;
    p.max_bets = rest[0] - '0';
    p.ranks = rest[1] - '0';
    p.suits = rest[2] - '0';
  } else {
    return std::nullopt;
  }
  if (p.team_size < 2 || p.adversary_count != 1 || p.ranks < 2)
    return std::nullopt;
  return p;
}

namespace {

// Shared one-round betting engine, following the rules of the multi-player
// Kuhn/Leduc family: "check" both opens and calls (it matches the maximum
// bet), "fold" is offered only when calling costs chips, "raise" adds the
// call amount plus a fixed raise amount while raises remain.
struct PokerBuilder {
  const PokerParams& params;
  Vefg& g;
  int num_players;
  int adv_seat;
  std::vector<ActionId> check_act, raise_act, fold_act;  // per table seat
  // Deal and board actions indexed by [seat][rank] / [rank].
  std::vector<std::vector<ActionId>> deal_act;
  std::vector<ActionId> board_act;

  PokerBuilder(const PokerParams& prm, Vefg& game)
      : params(prm), g(game), num_players(prm.num_players()),
        adv_seat(prm.resolved_adversary_seat()) {}

  Player seat_player(int table_seat) const {
    if (table_seat == adv_seat) return Player::Opponent();
    int idx = table_seat - (table_seat > adv_seat ? 1 : 0);
    return Player::Seat(idx);
  }

  int payoff_row(int table_seat) const {
    return g.observer_row(seat_player(table_seat));
  }

  void MakeActions() {
    for (int s = 0; s < num_players; ++s) {
      std::string ps = "p" + std::to_string(s) + ":";
      Player owner = seat_player(s);
      check_act.push_back(g.AddAction(ps + "check", owner));
      raise_act.push_back(g.AddAction(ps + "raise", owner));
      fold_act.push_back(g.AddAction(ps + "fold", owner));
      for (ActionId a : {check_act[s], raise_act[s], fold_act[s]})
        for (Player obs : g.strategic_players()) g.SetVisible(obs, a, true);
    }
    deal_act.resize(num_players);
    for (int s = 0; s < num_players; ++s)
      for (int r = 0; r < params.ranks; ++r) {
        ActionId a = g.AddAction(
            "d" + std::to_string(s) + ":" + std::to_string(r),
            Player::Chance());
        g.SetVisible(seat_player(s), a, true);
        deal_act[s].push_back(a);
      }
    if (params.leduc)
      for (int r = 0; r < params.ranks; ++r) {
        ActionId a =
            g.AddAction("board:" + std::to_string(r), Player::Chance());
        for (Player obs : g.strategic_players()) g.SetVisible(obs, a, true);
        board_act.push_back(a);
      }
  }

  struct HandState {
    std::vector<int> card;         // rank per seat
    std::vector<int> rank_left;    // copies of each rank still in the deck
    int cards_left = 0;
    int board = -1;
    std::vector<Rat> contrib;      // chips in the pot per seat
    std::vector<uint8_t> folded;
    int round = 0;
  };

  void Build() {
    MakeActions();
    HandState h;
    h.card.assign(num_players, -1);
    h.rank_left.assign(params.ranks, params.leduc ? params.suits : 1);
    h.cards_left = params.ranks * (params.leduc ? params.suits : 1);
    h.contrib.assign(num_players, Rat(1));  // antes
    h.folded.assign(num_players, 0);
    Deal(g.AddChild(kNoNode, kNoAction, Player::Chance()), 0, h);
  }

  void Deal(NodeId node, int seat, HandState& h) {
    if (seat == num_players) {
      BettingRound(node, h, /*round=*/0);
      return;
    }
    std::vector<Rat> probs;
    for (int r = 0; r < params.ranks; ++r) {
      if (h.rank_left[r] == 0) continue;
      NodeId child = g.AddChild(node, deal_act[seat][r], Player::Chance());
      probs.emplace_back(h.rank_left[r], h.cards_left);
      h.card[seat] = r;
      --h.rank_left[r];
      --h.cards_left;
      // The next seat's deal (or betting) hangs under this child.
      RedealFrom(child, seat + 1, h);
      ++h.rank_left[r];
      ++h.cards_left;
      h.card[seat] = -1;
    }
    g.SetChance(node, std::move(probs));
  }

  void RedealFrom(NodeId child, int next_seat, HandState& h) {
    if (next_seat == num_players) {
      BettingRound(child, h, 0);
    } else {
      // Child becomes the chance node for the next deal.
      Deal(child, next_seat, h);
    }
  }

  int ActiveCount(const HandState& h) const {
    int n = 0;
    for (int s = 0; s < num_players; ++s)
      if (!h.folded[s]) ++n;
    return n;
  }

  int RaiseAmount(int round) const {
    if (!params.leduc) return 1;
    return round == 0 ? 2 : 4;
  }

  int MaxRaises() const { return params.leduc ? params.max_bets : 1; }

  void BettingRound(NodeId node, HandState& h, int round) {
    std::vector<Rat> round_bet(num_players, Rat(0));
    int start = 0;
    while (h.folded[start]) ++start;
    Bet(node, h, round, round_bet, Rat(0), 0, start, ActiveCount(h));
  }

  // `pending` counts active players that still owe a response this round.
  void Bet(NodeId node, HandState& h, int round,
           std::vector<Rat>& round_bet, Rat max_bet, int raises, int to_act,
           int pending) {
    if (ActiveCount(h) == 1 || pending == 0) {
      EndRound(node, h, round);
      return;
    }
    while (h.folded[to_act]) to_act = (to_act + 1) % num_players;
    // The node passed in is a placeholder created by the caller; stamp it.
    g.nodes[node].player = seat_player(to_act);
    int next = (to_act + 1) % num_players;

    {  // check / call
      NodeId child =
          g.AddChild(node, check_act[to_act], Player::Chance());
      Rat owed = max_bet - round_bet[to_act];
      round_bet[to_act] += owed;
      h.contrib[to_act] += owed;
      Bet(child, h, round, round_bet, max_bet, raises, next, pending - 1);
      round_bet[to_act] -= owed;
      h.contrib[to_act] -= owed;
    }
    if (raises < MaxRaises()) {  // raise
      NodeId child =
          g.AddChild(node, raise_act[to_act], Player::Chance());
      Rat owed = max_bet - round_bet[to_act] + RaiseAmount(round);
      round_bet[to_act] += owed;
      h.contrib[to_act] += owed;
      Bet(child, h, round, round_bet, round_bet[to_act], raises + 1, next,
          ActiveCount(h) - 1);
      round_bet[to_act] -= owed;
      h.contrib[to_act] -= owed;
    }
    if (max_bet > round_bet[to_act]) {  // fold
      NodeId child =
          g.AddChild(node, fold_act[to_act], Player::Chance());
      h.folded[to_act] = 1;
      Bet(child, h, round, round_bet, max_bet, raises, next, pending - 1);
      h.folded[to_act] = 0;
    }
  }

  void EndRound(NodeId node, HandState& h, int round) {
    if (ActiveCount(h) == 1 || !params.leduc || round == 1) {
      Showdown(node, h);
      return;
    }
    // Leduc: reveal the board card, then the second betting round.
    std::vector<Rat> probs;
    g.nodes[node].player = Player::Chance();
    for (int r = 0; r < params.ranks; ++r) {
      if (h.rank_left[r] == 0) continue;
      NodeId child = g.AddChild(node, board_act[r], Player::Chance());
      probs.emplace_back(h.rank_left[r], h.cards_left);
      h.board = r;
      --h.rank_left[r];
      --h.cards_left;
      BettingRound(child, h, 1);
      ++h.rank_left[r];
      ++h.cards_left;
      h.board = -1;
    }
    g.SetChance(node, std::move(probs));
  }

  void Showdown(NodeId node, HandState& h) {
    std::vector<int> winners;
    if (ActiveCount(h) == 1) {
      for (int s = 0; s < num_players; ++s)
        if (!h.folded[s]) winners.push_back(s);
    } else if (params.leduc) {
      for (int s = 0; s < num_players; ++s)
        if (!h.folded[s] && h.card[s] == h.board) winners.push_back(s);
      if (winners.empty()) {
        int best = -1;
        for (int s = 0; s < num_players; ++s)
          if (!h.folded[s] && (best < 0 || h.card[s] > h.card[best]))
            best = s;
        for (int s = 0; s < num_players; ++s)
          if (!h.folded[s] && h.card[s] == h.card[best]) winners.push_back(s);
      }
    } else {
      int best = -1;
      for (int s = 0; s < num_players; ++s)
        if (!h.folded[s] && (best < 0 || h.card[s] > h.card[best])) best = s;
      winners.push_back(best);
    }
    Rat pot = std::accumulate(h.contrib.begin(), h.contrib.end(), Rat(0));
    Rat share = pot / static_cast<int>(winners.size());
    std::vector<Rat> pay(g.num_observers(), Rat(0));
    for (int s = 0; s < num_players; ++s) {
      Rat v = -h.contrib[s];
      if (std::find(winners.begin(), winners.end(), s) != winners.end())
        v += share;
      pay[payoff_row(s)] = v;
    }
    g.nodes[node].player = Player::Chance();
    g.SetPayoffs(node, std::move(pay));
  }
};

Vefg MakePokerGame(const PokerParams& params) {
  TPIG_CHECK(params.team_size >= 2 && params.adversary_count == 1,
             InvalidParams, "team of >=2 against one adversary required");
  int deck = params.ranks * (params.leduc ? params.suits : 1);
  int need = params.num_players() + (params.leduc ? 1 : 0);
  TPIG_CHECK(deck >= need, InvalidParams,
             "deck too small for " + params.name());
  int seat = params.resolved_adversary_seat();
  TPIG_CHECK(seat >= 0 && seat < params.num_players(), InvalidParams,
             "adversary seat out of range");
  Vefg g;
  g.num_seats = params.team_size;
  g.has_opponent = true;
  g.visibility.assign(g.num_observers(), {});
  PokerBuilder builder(params, g);
  builder.Build();
  g.Freeze();
  return g;
}

}  // namespace

Vefg GenKuhn(const PokerParams& params) {
  PokerParams p = params;
  p.leduc = false;
  return MakePokerGame(p);
}

Vefg GenLeduc(const PokerParams& params) {
  PokerParams p = params;
  p.leduc = true;
  TPIG_CHECK(p.max_bets >= 1 && p.max_bets <= 5, InvalidParams,
             "Leduc bets per round out of range");
  return MakePokerGame(p);
}

namespace {

Vefg TryRandomVefg(std::mt19937_64& rng, int node_budget, int num_players) {
  int team = num_players - 1;
  TPIG_CHECK(team >= 1, InvalidParams, "need at least two players");
  Vefg g;
  g.num_seats = team;
  g.has_opponent = true;
  g.visibility.assign(g.num_observers(), {});

  auto rnd = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
  };

  int depth = rnd(3, 6);
  std::vector<Player> level_player(depth);
  std::vector<std::vector<ActionId>> level_actions(depth);
  for (int l = 0; l < depth; ++l) {
    int pick = rnd(0, num_players);  // last value = chance
    level_player[l] = pick == num_players
                          ? Player::Chance()
                          : (pick == team ? Player::Opponent()
                                          : Player::Seat(pick));
    int k = rnd(1, 3);
    for (int i = 0; i < k; ++i) {
      ActionId a = g.AddAction(
          "L" + std::to_string(l) + "a" + std::to_string(i),
          level_player[l]);
      for (Player obs : g.strategic_players()) {
        bool own = obs == level_player[l];
        g.SetVisible(obs, a, own || rnd(0, 2) > 0);
      }
      level_actions[l].push_back(a);
    }
  }

  int budget = node_budget;
  auto payoffs = [&]() {
    std::vector<Rat> pay(g.num_observers(), Rat(0));
    Rat sum = 0;
    for (int i = 0; i < team; ++i) {
      pay[i] = Rat(rnd(-3, 3));
      sum += pay[i];
    }
    pay[g.observer_row(Player::Opponent())] = -sum;
    return pay;
  };

  struct Frame {
    NodeId node;
    int level;
  };
  std::vector<Frame> todo;
  NodeId root = g.AddChild(kNoNode, kNoAction, depth > 0
                                                   ? level_player[0]
                                                   : Player::Chance());
  --budget;
  todo.push_back({root, 0});
  while (!todo.empty()) {
    Frame f = todo.back();
    todo.pop_back();
    bool make_terminal =
        f.level >= depth || budget <= 2 ||
        (f.level > 1 && rnd(0, 99) < 25 * f.level);
    if (make_terminal) {
      g.SetPayoffs(f.node, payoffs());
      continue;
    }
    g.nodes[f.node].player = level_player[f.level];
    int k = static_cast<int>(level_actions[f.level].size());
    std::vector<Rat> probs;
    std::vector<int> w(k);
    if (level_player[f.level].is_chance()) {
      int total = 0;
      for (int i = 0; i < k; ++i) {
        w[i] = rnd(i == 0 ? 1 : 0, 4);  // occasional zero-probability branch
        total += w[i];
      }
      for (int i = 0; i < k; ++i) probs.emplace_back(w[i], total);
    }
    for (int i = 0; i < k; ++i) {
      Player next = f.level + 1 < depth ? level_player[f.level + 1]
                                        : Player::Chance();
      NodeId child = g.AddChild(f.node, level_actions[f.level][i], next);
      --budget;
      todo.push_back({child, f.level + 1});
    }
    if (!probs.empty()) g.SetChance(f.node, std::move(probs));
  }
  g.Freeze();
  return g;
}

}  // namespace

Vefg GenRandomVefg(uint64_t seed, int node_budget, int num_players) {
  TPIG_CHECK(node_budget <= 10000, InvalidParams,
             "random game budget capped at 1e4 nodes");
  for (uint64_t attempt = 0; attempt < 200; ++attempt) {
    std::mt19937_64 rng(seed * 1000003ull + attempt);
    Vefg g = TryRandomVefg(rng, node_budget, num_players);
    ValidationReport rep = Validate(g);
    if (rep.accepted()) return g;
  }
  throw Error("random generator failed to produce a valid game");
}

std::vector<NamedGame> BuiltinExamples() {
  std::vector<NamedGame> out;
  {
    // Two-member team with chance and no adversary. Seat 1 observes every
    // action except the chance outcome; seat 0 holds the private state.
    Vefg g;
    g.num_seats = 2;
    g.has_opponent = false;
    g.visibility.assign(g.num_observers(), {});
    ActionId s0 = g.AddAction("s0", Player::Chance());
    ActionId s1 = g.AddAction("s1", Player::Chance());
    ActionId a = g.AddAction("A", Player::Seat(0));
    ActionId b = g.AddAction("B", Player::Seat(0));
    ActionId cc = g.AddAction("C", Player::Seat(1));
    ActionId dd = g.AddAction("D", Player::Seat(1));
    for (ActionId act : {a, b, cc, dd}) {
      g.SetVisible(Player::Seat(0), act, true);
      g.SetVisible(Player::Seat(1), act, true);
    }
    g.SetVisible(Player::Seat(0), s0, true);
    g.SetVisible(Player::Seat(0), s1, true);
    NodeId root = g.AddChild(kNoNode, kNoAction, Player::Chance());
    g.SetChance(root, {Rat(1, 2), Rat(1, 2)});
    for (int st = 0; st < 2; ++st) {
      NodeId n1 = g.AddChild(root, st == 0 ? s0 : s1, Player::Seat(0));
      for (ActionId act1 : {a, b}) {
        NodeId n2 = g.AddChild(n1, act1, Player::Seat(1));
        for (ActionId act2 : {cc, dd}) {
          NodeId z = g.AddChild(n2, act2, Player::Chance());
          bool match = (st == 0) == (act2 == cc);
          Rat u = match ? Rat(act1 == a ? 2 : 1) : Rat(0);
          g.SetPayoffs(z, {u, Rat(0)});
        }
      }
    }
    g.Freeze();
    out.push_back({"signal-coop", std::move(g)});
  }
  {
    // Adversarial variant: the chance outcome and seat 0's reply are hidden
    // from seat 1, so all six team decision nodes share one public state.
    Vefg g;
    g.num_seats = 2;
    g.has_opponent = true;
    g.visibility.assign(g.num_observers(), {});
    ActionId s0 = g.AddAction("s0", Player::Chance());
    ActionId s1 = g.AddAction("s1", Player::Chance());
    ActionId a = g.AddAction("A", Player::Seat(0));
    ActionId b = g.AddAction("B", Player::Seat(0));
    ActionId cc = g.AddAction("C", Player::Seat(0));
    ActionId dd = g.AddAction("D", Player::Seat(0));
    ActionId e = g.AddAction("E", Player::Seat(1));
    ActionId f = g.AddAction("F", Player::Seat(1));
    ActionId x = g.AddAction("X", Player::Opponent());
    ActionId y = g.AddAction("Y", Player::Opponent());
    g.SetVisible(Player::Seat(0), s0, true);
    g.SetVisible(Player::Seat(0), s1, true);
    for (ActionId act : {a, b, cc, dd}) g.SetVisible(Player::Seat(0), act, true);
    for (ActionId act : {e, f})
      for (Player obs : g.strategic_players()) g.SetVisible(obs, act, true);
    for (ActionId act : {x, y})
      for (Player obs : g.strategic_players()) g.SetVisible(obs, act, true);
    NodeId root = g.AddChild(kNoNode, kNoAction, Player::Chance());
    g.SetChance(root, {Rat(1, 2), Rat(1, 2)});
    int sign = 1;
    for (int st = 0; st < 2; ++st) {
      NodeId n1 = g.AddChild(root, st == 0 ? s0 : s1, Player::Seat(0));
      for (ActionId act1 : (st == 0 ? std::vector<ActionId>{a, b}
                                    : std::vector<ActionId>{cc, dd})) {
        NodeId n2 = g.AddChild(n1, act1, Player::Seat(1));
        for (ActionId act2 : {e, f}) {
          NodeId n3 = g.AddChild(n2, act2, Player::Opponent());
          for (ActionId act3 : {x, y}) {
            NodeId z = g.AddChild(n3, act3, Player::Chance());
            // A deterministic but non-degenerate zero-sum payoff pattern.
            int v = ((st == 0) == (act2 == e) ? 2 : -1) +
                    ((act1 == a || act1 == cc) == (act3 == x) ? 1 : 0);
            v *= sign;
            g.SetPayoffs(z, {Rat(v), Rat(0), Rat(-v)});
            sign = -sign;
          }
        }
      }
    }
    g.Freeze();
    out.push_back({"fig1-adversarial", std::move(g)});
  }
  return out;
}

Vefg GenerateByName(const std::string& name, int adversary_seat) {
  if (auto params = ParseInstanceName(name)) {
    params->adversary_seat = adversary_seat;
    return params->leduc ? GenLeduc(*params) : GenKuhn(*params);
  }
  for (auto& ex : BuiltinExamples())
    if (ex.name == name) return std::move(ex.game);
  throw InvalidParams("unknown instance '" + name +
                      "' (expected mnKr, mnLbrc, or a builtin name)");
}

}  // namespace tpig
