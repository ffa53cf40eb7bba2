#include "gwa/nuglue.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace gwa {

Rat GeneralizedStrategyProfile::prob(const ViewTarget& anchor,
                                     const std::string& move) const {
  auto it = dist.find(anchor);
  if (it == dist.end()) return Rat(0);
  auto jt = it->second.find(move);
  return jt == it->second.end() ? Rat(0) : jt->second;
}

std::pair<std::string, History> NuGame::origin(const History& h) const {
  if (h.empty()) throw std::invalid_argument("the glued root has no origin");
  return {h.front(), History(h.begin() + 1, h.end())};
}

std::map<std::string, Rat> uniform_nu(const GameWithAwareness& gwa) {
  std::map<std::string, Rat> out;
  Rat w(1, static_cast<long>(gwa.games.size()));
  for (const auto& [id, ag] : gwa.games) out[id] = w;
  return out;
}

NuGame build_nu(const GameWithAwareness& gwa, const std::map<std::string, Rat>& nu) {
  if (nu.size() != gwa.games.size())
    throw std::invalid_argument("prior must weight every view game");
  Rat total(0);
  for (const auto& [id, w] : nu) {
    if (!gwa.games.count(id))
      throw std::invalid_argument("prior weights unknown game '" + id + "'");
    if (w <= 0)
      throw std::invalid_argument("prior weight of '" + id + "' is not positive");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("prior weights do not sum to 1");
  for (const auto& [id, ag] : gwa.games)
    for (const auto& h : ag.base.histories)
      if (!h.empty() && gwa.games.count(h.back()))
        throw std::invalid_argument("game id '" + h.back() +
                                    "' collides with a move label");

  NuGame out;
  out.nu = nu;

  std::map<std::string, std::set<History>> feasible;
  for (const auto& [id, ag] : gwa.games) feasible[id] = feasible_histories(gwa, id);

  // Temporary players: one per (player, view) pair in the anchor space.
  auto gsets = generalized_info_sets(gwa);
  std::set<std::string> player_names;
  for (const auto& gs : gsets) {
    std::string name =
        NuGame::player_name(gs.anchor.infoset.player, gs.anchor.game);
    player_names.insert(name);
    out.player_origin[name] = {gs.anchor.infoset.player, gs.anchor.game};
  }

  ExtensiveGame& g = out.game;
  g.players.assign(player_names.begin(), player_names.end());
  g.histories.insert(History{});
  g.owner[History{}] = kChance;
  for (const auto& [id, w] : nu) g.chance[History{}][id] = w;

  for (const auto& [id, ag] : gwa.games) {
    const ExtensiveGame& src = ag.base;
    for (const auto& h : feasible.at(id)) {
      History glued;
      glued.reserve(h.size() + 1);
      glued.push_back(id);
      glued.insert(glued.end(), h.begin(), h.end());

      bool has_children = false;
      for (const auto& m : src.moves_at(h)) {
        History child = h;
        child.push_back(m);
        if (feasible.at(id).count(child)) has_children = true;
      }
      g.histories.insert(glued);
      if (has_children) {
        const std::string& mover = src.owner.at(h);
        if (mover == kChance) {
          g.owner[glued] = kChance;
          g.chance[glued] = src.chance.at(h);
        } else {
          g.owner[glued] =
              NuGame::player_name(mover, gwa.target(id, h).game);
        }
      } else {
        if (!src.is_terminal(h))
          throw std::logic_error("feasible history " + history_to_string(h) +
                                 " of '" + id + "' has no feasible continuation");
        std::vector<Rat> u;
        u.reserve(g.players.size());
        for (const auto& name : g.players) {
          const auto& [pl, view] = out.player_origin.at(name);
          u.push_back(view == id ? src.payoffs.at(h)[static_cast<std::size_t>(
                                       src.player_index(pl))]
                                 : Rat(0));
        }
        g.payoffs[glued] = std::move(u);
      }
    }
  }

  // Weld every generalized information set into one glued information set.
  for (const auto& gs : gsets) {
    std::vector<History> members;
    for (const auto& [gid, h] : gs.members) {
      if (!feasible.at(gid).count(h)) continue;
      History glued;
      glued.push_back(gid);
      glued.insert(glued.end(), h.begin(), h.end());
      members.push_back(std::move(glued));
    }
    if (members.empty()) continue;  // the whole set was pruned away
    std::string name =
        NuGame::player_name(gs.anchor.infoset.player, gs.anchor.game);
    g.infosets[name].push_back(std::move(members));
  }
  g.reindex();

  auto rep = validate_game(g);
  if (!rep.ok())
    throw std::logic_error("glued game is malformed:\n" + rep.summary());

  for (const auto& gs : gsets) {
    std::vector<History> possible;
    const auto& anchor_members =
        gwa.game(gs.anchor.game).base.infoset(gs.anchor.infoset);
    for (const auto& h : anchor_members) {
      if (!feasible.at(gs.anchor.game).count(h)) continue;
      History glued;
      glued.push_back(gs.anchor.game);
      glued.insert(glued.end(), h.begin(), h.end());
      possible.push_back(std::move(glued));
    }
    std::sort(possible.begin(), possible.end());

    // Locate the glued information set this anchor became.
    std::optional<InfosetKey> key;
    for (const auto& [gid, h] : gs.members) {
      if (!feasible.at(gid).count(h)) continue;
      History glued;
      glued.push_back(gid);
      glued.insert(glued.end(), h.begin(), h.end());
      key = g.infoset_of(glued);
      break;
    }
    if (!key) continue;
    if (possible.empty())
      throw std::logic_error("anchor " + to_string(gs.anchor) +
                             " has no feasible history of its own game");
    out.anchor_of[*key] = gs.anchor;
    out.possibility.possible[*key] = std::move(possible);
  }
  return out;
}

BehavioralProfile lift_strategy(const GeneralizedStrategyProfile& gp, const NuGame& nug) {
  BehavioralProfile out;
  for (const auto& [key, anchor] : nug.anchor_of) {
    auto it = gp.dist.find(anchor);
    if (it == gp.dist.end())
      throw std::invalid_argument("no local strategy at anchor " + to_string(anchor));
    out.dist[key] = it->second;
  }
  return out;
}

GeneralizedStrategyProfile lower_strategy(const NuGame& nug, const BehavioralProfile& sigma) {
  GeneralizedStrategyProfile out;
  for (const auto& [key, anchor] : nug.anchor_of) {
    auto it = sigma.dist.find(key);
    if (it == sigma.dist.end())
      throw std::invalid_argument("no strategy at glued set " + to_string(key));
    out.dist[anchor] = it->second;
  }
  return out;
}

BeliefSystem lift_beliefs(const GeneralizedBeliefSystem& gb, const NuGame& nug) {
  BeliefSystem out;
  for (const auto& [key, anchor] : nug.anchor_of) {
    auto it = gb.beliefs.find(anchor);
    if (it == gb.beliefs.end())
      throw std::invalid_argument("no beliefs at anchor " + to_string(anchor));
    const auto& possible = nug.possibility.at(key);
    for (const auto& [h, w] : it->second) {
      History glued;
      glued.push_back(anchor.game);
      glued.insert(glued.end(), h.begin(), h.end());
      if (w != 0 &&
          std::find(possible.begin(), possible.end(), glued) == possible.end())
        throw std::invalid_argument("belief support outside the possible set at " +
                                    to_string(anchor));
      out.beliefs[key][glued] = w;
    }
  }
  return out;
}

GeneralizedBeliefSystem lower_beliefs(const NuGame& nug, const BeliefSystem& mu) {
  GeneralizedBeliefSystem out;
  for (const auto& [key, anchor] : nug.anchor_of) {
    auto it = mu.beliefs.find(key);
    if (it == mu.beliefs.end())
      throw std::invalid_argument("no beliefs at glued set " + to_string(key));
    const auto& possible = nug.possibility.at(key);
    for (const auto& [glued, w] : it->second) {
      if (w != 0 &&
          std::find(possible.begin(), possible.end(), glued) == possible.end())
        throw std::invalid_argument("belief support outside the possible set at " +
                                    to_string(key));
      out.beliefs[anchor][nug.origin(glued).second] = w;
    }
  }
  return out;
}

namespace {

// Behavioral profile inside a single view: every mover plays the local
// strategy of its anchor, with optional overrides.
BehavioralProfile view_profile(const GameWithAwareness& gwa, const std::string& gid,
                               const GeneralizedStrategyProfile& gp,
                               const std::map<ViewTarget, std::string>* pure_override) {
  const ExtensiveGame& g = gwa.game(gid).base;
  BehavioralProfile out;
  for (const auto& k : g.all_infosets()) {
    ViewTarget t = gwa.fmap.at({gid, k});
    if (pure_override) {
      auto ot = pure_override->find(t);
      if (ot != pure_override->end()) {
        out.dist[k] = {{ot->second, Rat(1)}};
        continue;
      }
    }
    auto it = gp.dist.find(t);
    if (it == gp.dist.end())
      throw std::invalid_argument("no local strategy at anchor " + to_string(t));
    out.dist[k] = it->second;
  }
  return out;
}

}  // namespace

GeneralizedNashResult check_generalized_nash(const GameWithAwareness& gwa,
                                             const GeneralizedStrategyProfile& gp,
                                             const std::map<std::string, Rat>& nu) {
  GeneralizedNashResult out;
  out.ok = true;

  auto prior = nu.empty() ? uniform_nu(gwa) : nu;
  NuGame nug = build_nu(gwa, prior);
  BehavioralProfile glued = lift_strategy(gp, nug);

  for (const auto& player : gwa.underlying.players) {
    for (const auto& gid : player_views(gwa, player)) {
      const ExtensiveGame& g = gwa.game(gid).base;

      // Anchors of this local strategy that matter inside its own view,
      // together with the view information sets tied to each.
      std::map<ViewTarget, std::vector<InfosetKey>> tied;
      for (const auto& k : g.all_infosets()) {
        if (k.player != player) continue;
        ViewTarget t = gwa.fmap.at({gid, k});
        if (t.game == gid) tied[t].push_back(k);
      }
      // The deviation value is multilinear in the per-anchor distributions
      // only if tied nodes never stack on one path.
      for (const auto& [t, keys] : tied)
        for (const auto& k1 : keys)
          for (const auto& k2 : keys)
            for (const auto& h1 : g.infoset(k1))
              for (const auto& h2 : g.infoset(k2))
                if (is_strict_prefix(h1, h2))
                  throw std::logic_error("anchor " + to_string(t) +
                                         " ties prefix-related nodes in '" + gid + "'");

      Rat current = ex_ante_utility(g, view_profile(gwa, gid, gp, nullptr), player);
      Rat best = current;
      std::vector<ViewTarget> anchors;
      for (const auto& [t, keys] : tied) anchors.push_back(t);
      std::map<ViewTarget, std::string> assignment;
      std::function<void(std::size_t)> enumerate = [&](std::size_t idx) {
        if (idx == anchors.size()) {
          Rat v = ex_ante_utility(g, view_profile(gwa, gid, gp, &assignment), player);
          if (v > best) best = v;
          return;
        }
        const auto& t = anchors[idx];
        const auto& moves =
            gwa.game(t.game).base.infoset_moves(t.infoset);
        for (const auto& m : moves) {
          assignment[t] = m;
          enumerate(idx + 1);
        }
        assignment.erase(t);
      };
      enumerate(0);
      Rat slack = best - current;

      // Cross-check through the glued game: the temporary player's slack
      // there is the view slack scaled by the prior weight.
      std::string name = NuGame::player_name(player, gid);
      Rat glued_slack = best_response_value_ex_ante(nug.game, glued, name) -
                        ex_ante_utility(nug.game, glued, name);
      if (glued_slack != prior.at(gid) * slack)
        throw std::logic_error("view and glued-game slacks disagree for " + name);

      if (slack > 0) out.ok = false;
      out.slack[{player, gid}] = slack;
    }
  }
  return out;
}

}  // namespace gwa
