#include "gwa/rationalizability.hpp"

#include <algorithm>
#include <stdexcept>

#include "gwa/simplex.hpp"

namespace gwa {

namespace {

std::vector<int> profile_indices(const NormalFormGame& nf, int player,
                                 const std::string& own,
                                 const OpponentProfile& opp) {
  std::vector<int> profile(nf.players.size());
  std::size_t oi = 0;
  for (std::size_t p = 0; p < nf.players.size(); ++p) {
    if (static_cast<int>(p) == player)
      profile[p] = nf.strategy_index(static_cast<int>(p), own);
    else
      profile[p] = nf.strategy_index(static_cast<int>(p), opp[oi++]);
  }
  return profile;
}

std::string chance_label(const OpponentProfile& opp) {
  std::string label = "given";
  for (const auto& m : opp) label += "-" + m;
  return label;
}

// First history of the view game owned by `player`; per-branch variant
// restricts to histories starting with `branch`.
InfosetKey infoset_in(const ExtensiveGame& g, const std::string& player,
                      const std::string& branch = std::string()) {
  for (const auto& [h, mover] : g.owner) {
    if (mover != player) continue;
    if (!branch.empty() && (h.empty() || h.front() != branch)) continue;
    return *g.infoset_of(h);
  }
  throw std::logic_error("no node of '" + player + "' in the view game");
}

}  // namespace

std::vector<OpponentProfile> opponent_profiles(
    const NormalFormGame& nf, int player,
    const std::vector<std::vector<std::string>>& sets) {
  std::vector<OpponentProfile> out{OpponentProfile{}};
  for (std::size_t p = 0; p < nf.players.size(); ++p) {
    if (static_cast<int>(p) == player) continue;
    std::vector<OpponentProfile> next;
    for (const auto& partial : out)
      for (const auto& s : sets[p]) {
        OpponentProfile d = partial;
        d.push_back(s);
        next.push_back(std::move(d));
      }
    out = std::move(next);
  }
  return out;
}

Rat belief_payoff(const NormalFormGame& nf, int player, const std::string& strategy,
                  const std::map<OpponentProfile, Rat>& pi) {
  Rat total = 0;
  for (const auto& [opp, p] : pi)
    total += p * nf.payoff(profile_indices(nf, player, strategy, opp), player);
  return total;
}

std::optional<BeliefWitness> witness_belief(const NormalFormGame& nf, int player,
                                            const std::string& strategy,
                                            const std::vector<OpponentProfile>& domain) {
  if (domain.empty()) throw std::invalid_argument("empty belief domain");
  const auto& own = nf.strategies[static_cast<std::size_t>(player)];
  std::vector<std::string> alts;
  for (const auto& a : own)
    if (a != strategy) alts.push_back(a);

  // Variables: one probability per domain profile, then one surplus per
  // alternative strategy. Rows: Sum_j (u(s,d_j) - u(a,d_j)) pi_j = surplus_a
  // for every alternative a, and Sum_j pi_j = 1.
  const std::size_t d = domain.size();
  const std::size_t cols = d + alts.size();
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  for (std::size_t k = 0; k < alts.size(); ++k) {
    std::vector<Rat> row(cols, Rat(0));
    for (std::size_t j = 0; j < d; ++j) {
      const auto& opp = domain[j];
      row[j] = nf.payoff(profile_indices(nf, player, strategy, opp), player) -
               nf.payoff(profile_indices(nf, player, alts[k], opp), player);
    }
    row[d + k] = Rat(-1);
    A.push_back(std::move(row));
    b.push_back(Rat(0));
  }
  {
    std::vector<Rat> row(cols, Rat(0));
    for (std::size_t j = 0; j < d; ++j) row[j] = Rat(1);
    A.push_back(std::move(row));
    b.push_back(Rat(1));
  }

  auto x = feasible_point(A, b);
  if (!x) return std::nullopt;

  BeliefWitness w;
  w.player = player;
  w.strategy = strategy;
  for (std::size_t j = 0; j < d; ++j)
    if ((*x)[j] != 0) w.pi[domain[j]] = (*x)[j];

  // Independent re-verification of the feasibility answer.
  Rat mass = 0;
  for (const auto& [opp, p] : w.pi) {
    if (p < 0) throw std::logic_error("negative probability in witness belief");
    mass += p;
  }
  if (mass != 1) throw std::logic_error("witness belief does not sum to one");
  Rat base = belief_payoff(nf, player, strategy, w.pi);
  for (const auto& a : alts)
    if (belief_payoff(nf, player, a, w.pi) > base)
      throw std::logic_error("witness belief fails the best-response inequalities");
  return w;
}

std::vector<std::string> best_response_set(const NormalFormGame& nf, int player,
                                           const std::vector<OpponentProfile>& domain) {
  std::vector<std::string> out;
  for (const auto& s : nf.strategies[static_cast<std::size_t>(player)])
    if (witness_belief(nf, player, s, domain)) out.push_back(s);
  return out;
}

RationalizableSets rationalizable_sets(const NormalFormGame& nf) {
  RationalizableSets rs;
  rs.sets = nf.strategies;
  rs.trace.push_back(rs.sets);
  while (true) {
    std::vector<std::vector<std::string>> next(nf.players.size());
    for (std::size_t p = 0; p < nf.players.size(); ++p) {
      auto domain = opponent_profiles(nf, static_cast<int>(p), rs.sets);
      next[p] = best_response_set(nf, static_cast<int>(p), domain);
      if (next[p].empty())
        throw std::logic_error("elimination emptied a strategy set");
    }
    rs.trace.push_back(next);
    bool fixed = (next == rs.sets);
    rs.sets = std::move(next);
    if (fixed) break;
  }
  return rs;
}

ExtensiveGame nf_to_extensive(const NormalFormGame& nf) {
  ExtensiveGame g;
  g.players = nf.players;
  std::vector<History> layer{History{}};
  g.histories.insert(History{});
  for (std::size_t p = 0; p < nf.players.size(); ++p) {
    std::vector<History> cell;
    std::vector<History> next;
    for (const auto& h : layer) {
      g.owner[h] = nf.players[p];
      cell.push_back(h);
      for (const auto& s : nf.strategies[p]) {
        History child = h;
        child.push_back(s);
        g.histories.insert(child);
        next.push_back(std::move(child));
      }
    }
    std::sort(cell.begin(), cell.end());
    g.infosets[nf.players[p]].push_back(std::move(cell));
    layer = std::move(next);
  }
  for (const auto& z : layer) {
    std::vector<int> profile(nf.players.size());
    for (std::size_t p = 0; p < nf.players.size(); ++p)
      profile[p] = nf.strategy_index(static_cast<int>(p), z[p]);
    std::vector<Rat> u;
    for (std::size_t p = 0; p < nf.players.size(); ++p)
      u.push_back(nf.payoff(profile, static_cast<int>(p)));
    g.payoffs[z] = std::move(u);
  }
  g.reindex();
  return g;
}

std::string view_id(const NormalFormGame& nf, int player, const std::string& strategy) {
  return "gamma-" + nf.players[static_cast<std::size_t>(player)] + "-" + strategy;
}

namespace {

// One subjective view: nature draws an opponent profile from the witness
// belief, the whole one-shot game is played under every draw, and the view's
// owner cannot tell the draws apart.
AugmentedGame make_view(const NormalFormGame& nf, const ExtensiveGame& underlying,
                        const std::string& underlying_id, int player,
                        const BeliefWitness& witness, const std::string& id) {
  AugmentedGame ag;
  ag.id = id;
  ag.underlying_ref = underlying_id;
  ExtensiveGame& g = ag.base;
  g.players = nf.players;
  g.histories.insert(History{});
  g.owner[History{}] = kChance;

  std::set<History> full(underlying.histories.begin(), underlying.histories.end());
  std::vector<History> own_cell;
  for (const auto& [opp, p] : witness.pi) {
    std::string label = chance_label(opp);
    for (const auto& s : nf.strategies[static_cast<std::size_t>(player)])
      if (s == label)
        throw std::invalid_argument("strategy name '" + label +
                                    "' collides with a nature move label");
    g.chance[History{}][label] = p;
    std::vector<History> layer{History{label}};
    g.histories.insert(History{label});
    for (std::size_t q = 0; q < nf.players.size(); ++q) {
      std::vector<History> cell;
      std::vector<History> next;
      for (const auto& h : layer) {
        g.owner[h] = nf.players[q];
        ag.awareness[h] = full;
        cell.push_back(h);
        for (const auto& s : nf.strategies[q]) {
          History child = h;
          child.push_back(s);
          g.histories.insert(child);
          next.push_back(std::move(child));
        }
      }
      std::sort(cell.begin(), cell.end());
      if (static_cast<int>(q) == player)
        own_cell.insert(own_cell.end(), cell.begin(), cell.end());
      else
        g.infosets[nf.players[q]].push_back(std::move(cell));
      layer = std::move(next);
    }
    for (const auto& z : layer) {
      std::vector<int> profile(nf.players.size());
      for (std::size_t q = 0; q < nf.players.size(); ++q)
        profile[q] = nf.strategy_index(static_cast<int>(q), z[q + 1]);
      std::vector<Rat> u;
      for (std::size_t q = 0; q < nf.players.size(); ++q)
        u.push_back(nf.payoff(profile, static_cast<int>(q)));
      g.payoffs[z] = std::move(u);
    }
  }
  std::sort(own_cell.begin(), own_cell.end());
  g.infosets[nf.players[static_cast<std::size_t>(player)]].push_back(std::move(own_cell));
  g.reindex();
  return ag;
}

}  // namespace

GameWithAwareness build_gamma_star(const NormalFormGame& nf,
                                   const std::vector<std::string>& s) {
  if (s.size() != nf.players.size())
    throw std::invalid_argument("profile length differs from the player count");
  RationalizableSets rs = rationalizable_sets(nf);
  for (std::size_t p = 0; p < s.size(); ++p)
    if (std::find(rs.sets[p].begin(), rs.sets[p].end(), s[p]) == rs.sets[p].end())
      throw std::invalid_argument("strategy '" + s[p] + "' of '" + nf.players[p] +
                                  "' is not rationalizable");

  GameWithAwareness w;
  w.underlying = nf_to_extensive(nf);
  w.underlying_id = "underlying";
  w.modeler = "gamma-m";

  // Witness beliefs over the rationalizable product, one per surviving
  // strategy. Existence is guaranteed by the fixpoint property.
  std::map<std::string, std::pair<int, BeliefWitness>> view_witness;
  for (std::size_t p = 0; p < nf.players.size(); ++p) {
    auto domain = opponent_profiles(nf, static_cast<int>(p), rs.sets);
    for (const auto& str : rs.sets[p]) {
      auto witness = witness_belief(nf, static_cast<int>(p), str, domain);
      if (!witness)
        throw std::logic_error("no witness belief for surviving strategy '" + str + "'");
      std::string id = view_id(nf, static_cast<int>(p), str);
      w.games.emplace(id, make_view(nf, w.underlying, w.underlying_id,
                                    static_cast<int>(p), *witness, id));
      view_witness.emplace(id, std::make_pair(static_cast<int>(p), *witness));
    }
  }

  // The modeler's view: the one-shot game itself, full awareness.
  {
    AugmentedGame gm;
    gm.id = "gamma-m";
    gm.underlying_ref = w.underlying_id;
    gm.base = w.underlying;
    std::set<History> full(w.underlying.histories.begin(), w.underlying.histories.end());
    for (const auto& [h, mover] : gm.base.owner)
      if (mover != kChance) gm.awareness[h] = full;
    w.games.emplace("gamma-m", std::move(gm));
  }

  // Anchors: the modeler's node of each player goes to that player's view of
  // their profile strategy; a view owner's node anchors at itself; any other
  // player's node under a nature draw goes to that player's view of the
  // strategy the draw hands them.
  for (std::size_t p = 0; p < nf.players.size(); ++p) {
    const auto& gm = w.games.at("gamma-m").base;
    InfosetKey k = infoset_in(gm, nf.players[p]);
    std::string tid = view_id(nf, static_cast<int>(p), s[p]);
    w.fmap[{"gamma-m", k}] = ViewTarget{tid, infoset_in(w.games.at(tid).base,
                                                        nf.players[p])};
  }
  for (const auto& [id, info] : view_witness) {
    const auto& [owner_idx, witness] = info;
    const ExtensiveGame& g = w.games.at(id).base;
    InfosetKey own = infoset_in(g, nf.players[static_cast<std::size_t>(owner_idx)]);
    w.fmap[{id, own}] = ViewTarget{id, own};
    for (const auto& [opp, p] : witness.pi) {
      std::string branch = chance_label(opp);
      std::size_t oi = 0;
      for (std::size_t q = 0; q < nf.players.size(); ++q) {
        if (static_cast<int>(q) == owner_idx) continue;
        std::string tid = view_id(nf, static_cast<int>(q), opp[oi++]);
        InfosetKey from = infoset_in(g, nf.players[q], branch);
        w.fmap[{id, from}] = ViewTarget{
            tid, infoset_in(w.games.at(tid).base, nf.players[q])};
      }
    }
  }
  return w;
}

std::map<std::string, Rat> underline_strategy(const GameWithAwareness& w,
                                              const std::string& player,
                                              const std::string& gid,
                                              const GeneralizedStrategyProfile& gp) {
  const ExtensiveGame& g = w.game(gid).base;
  auto it = g.infosets.find(player);
  if (it == g.infosets.end() || it->second.empty())
    throw std::invalid_argument("'" + player + "' never moves in '" + gid + "'");
  if (it->second.size() != 1)
    throw std::invalid_argument("'" + player + "' has several information sets in '" +
                                gid + "'; the local strategy is not a single choice");
  InfosetKey k = *g.infoset_of(it->second.front().front());
  return gp.dist.at(w.fmap.at({gid, k}));
}

EquilibriumRationalizabilityResult verify_equilibrium_rationalizability(
    const NormalFormGame& nf, const std::vector<std::string>& s, std::size_t cap) {
  GameWithAwareness w = build_gamma_star(nf, s);
  RationalizableSets rs = rationalizable_sets(nf);

  EquilibriumRationalizabilityResult out;

  // Every anchor belongs to the view of some (player, strategy); recover the
  // encoded strategy from the view id.
  std::map<std::string, std::pair<std::size_t, std::string>> encodes;
  for (std::size_t p = 0; p < nf.players.size(); ++p)
    for (const auto& str : rs.sets[p])
      encodes[view_id(nf, static_cast<int>(p), str)] = {p, str};

  std::vector<ViewTarget> anchors;
  for (const auto& gi : generalized_info_sets(w)) anchors.push_back(gi.anchor);

  for (const auto& t : anchors)
    out.equilibrium.dist[t] = {{encodes.at(t.game).second, Rat(1)}};
  out.part_i = check_generalized_nash(w, out.equilibrium).ok;

  // Exhaustive pure-profile sweep: every generalized Nash equilibrium must
  // pick a surviving strategy at every anchor.
  std::vector<std::vector<std::string>> moves;
  std::size_t total = 1;
  for (const auto& t : anchors) {
    moves.push_back(w.game(t.game).base.infoset_moves(t.infoset));
    total *= moves.back().size();
    if (total > cap)
      throw std::runtime_error("pure-profile enumeration exceeds the cap");
  }
  out.part_ii = true;
  std::vector<std::size_t> pick(anchors.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    GeneralizedStrategyProfile gp;
    for (std::size_t a = 0; a < anchors.size(); ++a)
      gp.dist[anchors[a]] = {{moves[a][pick[a]], Rat(1)}};
    if (check_generalized_nash(w, gp).ok) {
      for (std::size_t a = 0; a < anchors.size(); ++a) {
        const auto& surviving = rs.sets[encodes.at(anchors[a].game).first];
        if (std::find(surviving.begin(), surviving.end(), moves[a][pick[a]]) ==
            surviving.end())
          out.part_ii = false;
      }
    }
    for (std::size_t a = anchors.size(); a-- > 0;) {
      if (++pick[a] < moves[a].size()) break;
      pick[a] = 0;
    }
  }
  out.enumerated = total;
  return out;
}

}  // namespace gwa
