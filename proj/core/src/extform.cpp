#include "gwa/extform.hpp"

#include <algorithm>
#include <stdexcept>

namespace gwa {

namespace {

const std::vector<std::string> kNoMoves;

}  // namespace

void ExtensiveGame::reindex() {
  children_.clear();
  infoset_key_.clear();
  for (const auto& h : histories) {
    if (h.empty()) continue;
    History parent(h.begin(), h.end() - 1);
    children_[parent].push_back(h.back());
  }
  for (auto& [h, moves] : children_) std::sort(moves.begin(), moves.end());
  for (auto& [player, sets] : infosets) {
    for (auto& set : sets) std::sort(set.begin(), set.end());
    std::sort(sets.begin(), sets.end());
    for (std::size_t i = 0; i < sets.size(); ++i) {
      InfosetKey key{player, static_cast<int>(i)};
      for (const auto& h : sets[i]) infoset_key_[h] = key;
    }
  }
}

bool ExtensiveGame::is_terminal(const History& h) const {
  return children_.find(h) == children_.end();
}

const std::vector<std::string>& ExtensiveGame::moves_at(const History& h) const {
  auto it = children_.find(h);
  return it == children_.end() ? kNoMoves : it->second;
}

std::vector<History> ExtensiveGame::runs() const {
  std::vector<History> out;
  for (const auto& h : histories)
    if (is_terminal(h)) out.push_back(h);
  return out;
}

int ExtensiveGame::player_index(const std::string& player) const {
  for (std::size_t i = 0; i < players.size(); ++i)
    if (players[i] == player) return static_cast<int>(i);
  throw std::out_of_range("unknown player: " + player);
}

std::optional<InfosetKey> ExtensiveGame::infoset_of(const History& h) const {
  auto it = infoset_key_.find(h);
  if (it == infoset_key_.end()) return std::nullopt;
  return it->second;
}

const std::vector<History>& ExtensiveGame::infoset(const InfosetKey& k) const {
  auto it = infosets.find(k.player);
  if (it == infosets.end() || k.index < 0 ||
      static_cast<std::size_t>(k.index) >= it->second.size())
    throw std::out_of_range("unknown information set: " + to_string(k));
  return it->second[k.index];
}

std::vector<InfosetKey> ExtensiveGame::all_infosets() const {
  std::vector<InfosetKey> out;
  for (const auto& [player, sets] : infosets)
    for (std::size_t i = 0; i < sets.size(); ++i)
      out.push_back({player, static_cast<int>(i)});
  return out;
}

const std::vector<std::string>& ExtensiveGame::infoset_moves(const InfosetKey& k) const {
  return moves_at(infoset(k).front());
}

std::vector<std::pair<InfosetKey, std::string>> ExtensiveGame::experience(
    const std::string& player, const History& h) const {
  std::vector<std::pair<InfosetKey, std::string>> out;
  History prefix;
  for (const auto& move : h) {
    auto it = infoset_key_.find(prefix);
    if (it != infoset_key_.end() && it->second.player == player)
      out.emplace_back(it->second, move);
    prefix.push_back(move);
  }
  return out;
}

Rat BehavioralProfile::prob(const InfosetKey& k, const std::string& move) const {
  auto it = dist.find(k);
  if (it == dist.end()) return Rat(0);
  auto jt = it->second.find(move);
  return jt == it->second.end() ? Rat(0) : jt->second;
}

Rat BehavioralProfile::move_prob(const ExtensiveGame& g, const History& h,
                                 const std::string& move) const {
  auto ct = g.chance.find(h);
  if (ct != g.chance.end()) {
    auto jt = ct->second.find(move);
    return jt == ct->second.end() ? Rat(0) : jt->second;
  }
  auto key = g.infoset_of(h);
  if (!key) throw std::out_of_range("no mover at " + history_to_string(h));
  return prob(*key, move);
}

bool BehavioralProfile::completely_mixed(const ExtensiveGame& g) const {
  for (const auto& k : g.all_infosets())
    for (const auto& move : g.infoset_moves(k))
      if (prob(k, move) <= 0) return false;
  return true;
}

Rat BeliefSystem::at(const InfosetKey& k, const History& h) const {
  auto it = beliefs.find(k);
  if (it == beliefs.end()) return Rat(0);
  auto jt = it->second.find(h);
  return jt == it->second.end() ? Rat(0) : jt->second;
}

PossibilitySystem PossibilitySystem::full(const ExtensiveGame& g) {
  PossibilitySystem out;
  for (const auto& k : g.all_infosets()) out.possible[k] = g.infoset(k);
  return out;
}

const std::vector<History>& PossibilitySystem::at(const InfosetKey& k) const {
  auto it = possible.find(k);
  if (it == possible.end())
    throw std::out_of_range("possibility system undefined at " + to_string(k));
  return it->second;
}

bool PossibilitySystem::is_full(const ExtensiveGame& g) const {
  for (const auto& k : g.all_infosets()) {
    auto it = possible.find(k);
    if (it == possible.end() || it->second != g.infoset(k)) return false;
  }
  return true;
}

std::size_t NormalFormGame::profile_count() const {
  std::size_t n = 1;
  for (const auto& s : strategies) n *= s.size();
  return n;
}

std::size_t NormalFormGame::flat_index(const std::vector<int>& profile) const {
  std::size_t idx = 0;
  for (std::size_t p = 0; p < strategies.size(); ++p)
    idx = idx * strategies[p].size() + static_cast<std::size_t>(profile[p]);
  return idx;
}

const Rat& NormalFormGame::payoff(const std::vector<int>& profile, int player) const {
  return payoffs[flat_index(profile)][static_cast<std::size_t>(player)];
}

int NormalFormGame::strategy_index(int player, const std::string& name) const {
  const auto& list = strategies[static_cast<std::size_t>(player)];
  auto it = std::find(list.begin(), list.end(), name);
  if (it == list.end())
    throw std::out_of_range("unknown strategy '" + name + "' for player " +
                            players[static_cast<std::size_t>(player)]);
  return static_cast<int>(it - list.begin());
}

ValidationReport validate_game(const ExtensiveGame& g) {
  ValidationReport rep;
  if (g.players.empty()) rep.add("players", "player list is empty");
  {
    std::set<std::string> seen;
    for (const auto& p : g.players) {
      if (p == kChance) rep.add("players", "'" + kChance + "' is reserved for chance");
      if (!seen.insert(p).second) rep.add("players", "duplicate player '" + p + "'");
    }
  }
  if (!g.contains(History{})) {
    rep.add("histories", "missing root history");
    return rep;
  }
  for (const auto& h : g.histories) {
    if (h.empty()) continue;
    History parent(h.begin(), h.end() - 1);
    if (!g.contains(parent))
      rep.add("histories", "not prefix-closed at " + history_to_string(h));
  }

  std::set<std::string> player_set(g.players.begin(), g.players.end());
  for (const auto& h : g.histories) {
    bool terminal = g.is_terminal(h);
    auto ot = g.owner.find(h);
    if (terminal) {
      if (ot != g.owner.end())
        rep.add("owner", "terminal " + history_to_string(h) + " has an owner");
      auto pt = g.payoffs.find(h);
      if (pt == g.payoffs.end())
        rep.add("payoffs", "run " + history_to_string(h) + " has no payoff");
      else if (pt->second.size() != g.players.size())
        rep.add("payoffs", "payoff arity mismatch at " + history_to_string(h));
    } else {
      if (ot == g.owner.end()) {
        rep.add("owner", "nonterminal " + history_to_string(h) + " has no owner");
      } else if (ot->second != kChance && player_set.count(ot->second) == 0) {
        rep.add("owner", "unknown mover '" + ot->second + "' at " + history_to_string(h));
      }
      if (g.payoffs.count(h))
        rep.add("payoffs", "payoff at nonterminal " + history_to_string(h));
    }
  }
  for (const auto& [h, u] : g.payoffs)
    if (!g.contains(h)) rep.add("payoffs", "payoff at unknown " + history_to_string(h));
  for (const auto& [h, p] : g.owner)
    if (!g.contains(h)) rep.add("owner", "owner at unknown " + history_to_string(h));

  for (const auto& [h, ot] : g.owner) {
    if (!g.contains(h) || g.is_terminal(h)) continue;
    if (ot == kChance) {
      auto ct = g.chance.find(h);
      if (ct == g.chance.end()) {
        rep.add("chance", "no distribution at " + history_to_string(h));
        continue;
      }
      const auto& moves = g.moves_at(h);
      Rat total(0);
      for (const auto& [m, p] : ct->second) {
        if (std::find(moves.begin(), moves.end(), m) == moves.end())
          rep.add("chance", "probability on non-move '" + m + "' at " + history_to_string(h));
        if (p <= 0)
          rep.add("chance", "non-positive probability of '" + m + "' at " + history_to_string(h));
        total += p;
      }
      if (ct->second.size() != moves.size())
        rep.add("chance", "support differs from move set at " + history_to_string(h));
      if (total != 1)
        rep.add("chance", "probabilities sum to " + rat_to_string(total) + " at " +
                              history_to_string(h));
    }
  }
  for (const auto& [h, d] : g.chance) {
    auto ot = g.owner.find(h);
    if (ot == g.owner.end() || ot->second != kChance)
      rep.add("chance", "distribution at non-chance node " + history_to_string(h));
  }

  // Information partitions: per player, exactly the player's decision nodes,
  // disjoint, with a common move set inside each set.
  std::map<std::string, std::set<History>> covered;
  for (const auto& [player, sets] : g.infosets) {
    if (player_set.count(player) == 0)
      rep.add("infosets", "partition for unknown player '" + player + "'");
    for (const auto& set : sets) {
      if (set.empty()) {
        rep.add("infosets", "empty information set of '" + player + "'");
        continue;
      }
      const std::vector<std::string>* common = nullptr;
      for (const auto& h : set) {
        if (!g.contains(h)) {
          rep.add("infosets", "information set member " + history_to_string(h) +
                                  " is not a history");
          continue;
        }
        auto ot = g.owner.find(h);
        if (ot == g.owner.end() || ot->second != player)
          rep.add("infosets", history_to_string(h) + " is not a decision node of '" +
                                  player + "'");
        if (!covered[player].insert(h).second)
          rep.add("infosets", history_to_string(h) + " appears in two sets of '" +
                                  player + "'");
        if (!common)
          common = &g.moves_at(h);
        else if (*common != g.moves_at(h))
          rep.add("infosets", "move sets differ inside the information set of " +
                                  history_to_string(set.front()));
      }
    }
  }
  for (const auto& [h, ot] : g.owner) {
    if (ot == kChance || !g.contains(h)) continue;
    if (covered[ot].count(h) == 0)
      rep.add("infosets", history_to_string(h) + " is not in any information set of '" +
                              ot + "'");
  }

  // Perfect recall: members of one information set share the owner's
  // experience (own past information sets and moves, in order).
  for (const auto& [player, sets] : g.infosets) {
    for (const auto& set : sets) {
      if (set.size() < 2) continue;
      bool members_ok = true;
      for (const auto& h : set)
        if (!g.contains(h)) members_ok = false;
      if (!members_ok) continue;
      auto ref = g.experience(player, set.front());
      for (std::size_t i = 1; i < set.size(); ++i) {
        if (g.experience(player, set[i]) != ref) {
          rep.add("perfect-recall", history_to_string(set.front()) + " and " +
                                        history_to_string(set[i]) +
                                        " give '" + player + "' different experiences");
          break;
        }
      }
    }
  }
  return rep;
}

Rat reach_prob(const ExtensiveGame& g, const BehavioralProfile& sigma, const History& h) {
  return cond_reach_prob(g, sigma, h, History{});
}

Rat cond_reach_prob(const ExtensiveGame& g, const BehavioralProfile& sigma,
                    const History& target, const History& from) {
  if (!is_prefix(from, target)) return Rat(0);
  Rat p(1);
  History prefix = from;
  for (std::size_t i = from.size(); i < target.size(); ++i) {
    p *= sigma.move_prob(g, prefix, target[i]);
    if (p == 0) return p;
    prefix.push_back(target[i]);
  }
  return p;
}

Rat continuation_value(const ExtensiveGame& g, const BehavioralProfile& sigma,
                       const History& h, int player) {
  if (g.is_terminal(h))
    return g.payoffs.at(h)[static_cast<std::size_t>(player)];
  Rat total(0);
  History child = h;
  for (const auto& move : g.moves_at(h)) {
    Rat p = sigma.move_prob(g, h, move);
    if (p == 0) continue;
    child.push_back(move);
    total += p * continuation_value(g, sigma, child, player);
    child.pop_back();
  }
  return total;
}

Rat expected_utility_at(const ExtensiveGame& g, const BehavioralProfile& sigma,
                        const BeliefSystem& mu, const std::string& player,
                        const InfosetKey& I, const std::vector<History>* restrict_to) {
  const auto& members = restrict_to ? *restrict_to : g.infoset(I);
  int pi = g.player_index(player);
  Rat total(0);
  for (const auto& h : members) {
    Rat w = mu.at(I, h);
    if (w == 0) continue;
    total += w * continuation_value(g, sigma, h, pi);
  }
  return total;
}

namespace {

// Best achievable weighted continuation value when `player` replans at every
// own decision node in (or below) the weighted frontier, with choices tied
// across information sets. Perfect recall makes information sets under
// distinct frontier groups disjoint, so the groups optimize independently.
Rat best_plan_value(const ExtensiveGame& g, const BehavioralProfile& sigma,
                    const std::string& player, int pi,
                    std::vector<std::pair<History, Rat>> frontier) {
  Rat total(0);
  std::map<InfosetKey, std::vector<std::pair<History, Rat>>> groups;
  while (!frontier.empty()) {
    auto [h, w] = std::move(frontier.back());
    frontier.pop_back();
    if (w == 0) continue;
    if (g.is_terminal(h)) {
      total += w * g.payoffs.at(h)[static_cast<std::size_t>(pi)];
      continue;
    }
    auto key = g.infoset_of(h);
    if (key && key->player == player) {
      groups[*key].emplace_back(std::move(h), std::move(w));
      continue;
    }
    History child = h;
    for (const auto& move : g.moves_at(h)) {
      Rat p = sigma.move_prob(g, h, move);
      if (p == 0) continue;
      child.push_back(move);
      frontier.emplace_back(child, w * p);
      child.pop_back();
    }
  }
  for (auto& [key, members] : groups) {
    std::optional<Rat> best;
    for (const auto& move : g.infoset_moves(key)) {
      std::vector<std::pair<History, Rat>> next;
      next.reserve(members.size());
      for (const auto& [h, w] : members) {
        History child = h;
        child.push_back(move);
        next.emplace_back(std::move(child), w);
      }
      Rat v = best_plan_value(g, sigma, player, pi, std::move(next));
      if (!best || v > *best) best = v;
    }
    total += *best;
  }
  return total;
}

}  // namespace

Rat best_response_value(const ExtensiveGame& g, const BehavioralProfile& sigma,
                        const BeliefSystem& mu, const std::string& player,
                        const InfosetKey& I, const std::vector<History>* restrict_to) {
  const auto& members = restrict_to ? *restrict_to : g.infoset(I);
  std::vector<std::pair<History, Rat>> frontier;
  for (const auto& h : members) frontier.emplace_back(h, mu.at(I, h));
  return best_plan_value(g, sigma, player, g.player_index(player), std::move(frontier));
}

Rat best_response_value_ex_ante(const ExtensiveGame& g, const BehavioralProfile& sigma,
                                const std::string& player) {
  return best_plan_value(g, sigma, player, g.player_index(player),
                         {{History{}, Rat(1)}});
}

Rat ex_ante_utility(const ExtensiveGame& g, const BehavioralProfile& sigma,
                    const std::string& player) {
  return continuation_value(g, sigma, History{}, g.player_index(player));
}

NashResult check_nash(const ExtensiveGame& g, const BehavioralProfile& sigma,
                      const Rat& tol) {
  NashResult out;
  out.ok = true;
  for (const auto& player : g.players) {
    Rat slack = best_response_value_ex_ante(g, sigma, player) -
                ex_ante_utility(g, sigma, player);
    if (slack > tol) out.ok = false;
    out.slack[player] = slack;
  }
  return out;
}

AgentNormalForm to_agent_normal_form(const ExtensiveGame& g) {
  AgentNormalForm out;
  out.agents = g.all_infosets();
  auto& nf = out.game;
  for (const auto& k : out.agents) {
    nf.players.push_back(to_string(k));
    nf.strategies.push_back(g.infoset_moves(k));
  }
  std::size_t count = nf.profile_count();
  nf.payoffs.assign(count, {});
  std::vector<int> profile(out.agents.size(), 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    BehavioralProfile sigma;
    for (std::size_t a = 0; a < out.agents.size(); ++a)
      sigma.dist[out.agents[a]] = {
          {nf.strategies[a][static_cast<std::size_t>(profile[a])], Rat(1)}};
    auto& row = nf.payoffs[flat];
    row.reserve(out.agents.size());
    for (const auto& k : out.agents)
      row.push_back(ex_ante_utility(g, sigma, k.player));
    for (std::size_t a = out.agents.size(); a-- > 0;) {
      if (++profile[a] < static_cast<int>(nf.strategies[a].size())) break;
      profile[a] = 0;
    }
  }
  return out;
}

}  // namespace gwa
