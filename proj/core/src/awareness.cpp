#include "gwa/awareness.hpp"

#include <algorithm>
#include <stdexcept>

namespace gwa {

std::string to_string(const ViewTarget& t) {
  return t.game + ":" + to_string(t.infoset);
}

const AugmentedGame& GameWithAwareness::game(const std::string& id) const {
  auto it = games.find(id);
  if (it == games.end()) throw std::out_of_range("unknown game id: " + id);
  return it->second;
}

ViewTarget GameWithAwareness::target(const std::string& gid, const History& h) const {
  auto key = game(gid).base.infoset_of(h);
  if (!key)
    throw std::out_of_range("no mover at " + history_to_string(h) + " in " + gid);
  auto it = fmap.find({gid, *key});
  if (it == fmap.end())
    throw std::out_of_range("view map undefined at " + gid + ":" + to_string(*key));
  return it->second;
}

History project(const History& h, const ExtensiveGame& underlying) {
  std::set<std::string> labels;
  for (const auto& u : underlying.histories)
    if (!u.empty()) labels.insert(u.back());
  History out;
  for (const auto& m : h)
    if (labels.count(m)) out.push_back(m);
  return out;
}

namespace {

bool is_player_of(const ExtensiveGame& g, const std::string& name) {
  return std::find(g.players.begin(), g.players.end(), name) != g.players.end();
}

// Anchors and moves along the `player`-owned prefixes of h (the improper
// prefix included, marked by an empty move label), grouped by anchor.
std::map<ViewTarget, std::set<std::string>> own_anchor_trace(
    const GameWithAwareness& gwa, const std::string& gid, const std::string& player,
    const History& h) {
  const auto& g = gwa.game(gid).base;
  std::map<ViewTarget, std::set<std::string>> out;
  History prefix;
  for (std::size_t i = 0; i <= h.size(); ++i) {
    auto ot = g.owner.find(prefix);
    if (ot != g.owner.end() && ot->second == player)
      out[gwa.target(gid, prefix)].insert(i < h.size() ? h[i] : std::string());
    if (i < h.size()) prefix.push_back(h[i]);
  }
  return out;
}

void check_augmented(const GameWithAwareness& gwa, const AugmentedGame& ag,
                     ValidationReport& rep) {
  const std::string& id = ag.id;
  auto base_rep = validate_game(ag.base);
  for (auto& v : base_rep.violations)
    rep.add("game", id + ": " + v.code + ": " + v.message);
  if (!base_rep.ok()) return;

  if (ag.underlying_ref != gwa.underlying_id)
    rep.add("game", id + ": underlying reference '" + ag.underlying_ref +
                        "' does not name the shared underlying game");
  for (const auto& p : ag.base.players)
    if (!is_player_of(gwa.underlying, p))
      rep.add("game", id + ": player '" + p + "' is not an underlying player");

  // Awareness: defined exactly at the player-owned histories, with values
  // inside the underlying history set.
  for (const auto& [h, mover] : ag.base.owner) {
    if (mover == kChance) {
      if (ag.awareness.count(h))
        rep.add("awareness", id + ": awareness assigned at chance node " +
                                 history_to_string(h));
      continue;
    }
    if (!ag.awareness.count(h))
      rep.add("awareness", id + ": no awareness level at " + history_to_string(h));
  }
  for (const auto& [h, a] : ag.awareness) {
    auto ot = ag.base.owner.find(h);
    if (ot == ag.base.owner.end() || ot->second == kChance)
      rep.add("awareness", id + ": awareness at non-decision node " +
                               history_to_string(h));
    for (const auto& u : a)
      if (!gwa.underlying.contains(u))
        rep.add("awareness", id + ": awareness level contains non-underlying " +
                                 history_to_string(u));
  }

  // Constant across each information set; never shrinking along a player's
  // own path.
  for (const auto& k : ag.base.all_infosets()) {
    const auto& members = ag.base.infoset(k);
    auto ref = ag.awareness.find(members.front());
    if (ref == ag.awareness.end()) continue;
    for (const auto& h : members) {
      auto it = ag.awareness.find(h);
      if (it != ag.awareness.end() && it->second != ref->second) {
        rep.add("awareness", id + ": level differs across the information set of " +
                                 history_to_string(members.front()));
        break;
      }
    }
  }
  for (const auto& [h, a] : ag.awareness) {
    for (const auto& [h2, a2] : ag.awareness) {
      if (!is_strict_prefix(h, h2)) continue;
      if (ag.base.owner.at(h) != ag.base.owner.at(h2)) continue;
      if (!std::includes(a2.begin(), a2.end(), a.begin(), a.end()))
        rep.add("awareness", id + ": level shrinks from " + history_to_string(h) +
                                 " to " + history_to_string(h2));
    }
  }

  // Payoffs agree with the underlying game along projected runs.
  std::set<History> underlying_runs;
  for (const auto& z : gwa.underlying.runs()) underlying_runs.insert(z);
  for (const auto& z : ag.base.runs()) {
    History zbar = project(z, gwa.underlying);
    if (!underlying_runs.count(zbar)) {
      rep.add("payoffs", id + ": run " + history_to_string(z) +
                             " does not project onto an underlying run");
      continue;
    }
    for (std::size_t p = 0; p < ag.base.players.size(); ++p) {
      int up = gwa.underlying.player_index(ag.base.players[p]);
      if (ag.base.payoffs.at(z)[p] !=
          gwa.underlying.payoffs.at(zbar)[static_cast<std::size_t>(up)])
        rep.add("payoffs", id + ": payoff of '" + ag.base.players[p] + "' at " +
                               history_to_string(z) +
                               " differs from the underlying payoff at " +
                               history_to_string(zbar));
    }
  }
}

}  // namespace

ValidationReport validate_awareness(const GameWithAwareness& gwa) {
  ValidationReport rep;
  {
    auto urep = validate_game(gwa.underlying);
    for (auto& v : urep.violations)
      rep.add("underlying", v.code + ": " + v.message);
  }
  if (!gwa.games.count(gwa.modeler))
    rep.add("modeler", "modeler id '" + gwa.modeler + "' is not in the family");
  for (const auto& [id, ag] : gwa.games) {
    if (ag.id != id)
      rep.add("game", id + ": stored id '" + ag.id + "' differs from the key");
    check_augmented(gwa, ag, rep);
  }
  if (!rep.ok()) return rep;  // structural defects make the view checks moot

  // View map: total on player information sets, anchored at an information
  // set of the same player in a family game.
  for (const auto& [id, ag] : gwa.games) {
    for (const auto& k : ag.base.all_infosets()) {
      auto it = gwa.fmap.find({id, k});
      if (it == gwa.fmap.end()) {
        rep.add("fmap", "no view at " + id + ":" + to_string(k));
        continue;
      }
      const auto& t = it->second;
      auto gt = gwa.games.find(t.game);
      if (gt == gwa.games.end()) {
        rep.add("fmap", id + ":" + to_string(k) + " targets unknown game '" +
                            t.game + "'");
        continue;
      }
      if (t.infoset.player != k.player) {
        rep.add("fmap", id + ":" + to_string(k) + " targets another player's set");
        continue;
      }
      try {
        gt->second.base.infoset(t.infoset);
      } catch (const std::out_of_range&) {
        rep.add("fmap", id + ":" + to_string(k) + " targets missing set " +
                            to_string(t.infoset));
      }
    }
  }
  for (const auto& [key, t] : gwa.fmap) {
    auto gt = gwa.games.find(key.first);
    if (gt == gwa.games.end()) {
      rep.add("fmap", "view for unknown game '" + key.first + "'");
      continue;
    }
    try {
      gt->second.base.infoset(key.second);
    } catch (const std::out_of_range&) {
      rep.add("fmap", "view for missing set " + key.first + ":" + to_string(key.second));
    }
  }
  if (!rep.ok()) return rep;

  std::map<std::string, std::set<History>> feasible;
  for (const auto& [id, ag] : gwa.games) feasible[id] = feasible_histories(gwa, id);

  for (const auto& [id, ag] : gwa.games) {
    for (const auto& k : ag.base.all_infosets()) {
      const History& h = ag.base.infoset(k).front();
      ViewTarget t = gwa.fmap.at({id, k});
      const AugmentedGame& tg = gwa.game(t.game);
      const auto& anchor_set = tg.base.infoset(t.infoset);
      const std::set<History>& a = ag.awareness.at(h);

      // C1: the awareness level is exactly the projection of the target
      // game's history set.
      std::set<History> target_proj;
      for (const auto& th : tg.base.histories)
        target_proj.insert(project(th, gwa.underlying));
      if (target_proj != a)
        rep.add("C1", id + ":" + to_string(k) + ": awareness level differs from the " +
                          "projection of game '" + t.game + "'");

      // C2: inside the target game nobody is aware of more, and each mover's
      // move set is the awareness-compatible underlying move set.
      for (const auto& [th, mover] : tg.base.owner) {
        if (mover == kChance) continue;
        const auto& ta = tg.awareness.at(th);
        if (!std::includes(a.begin(), a.end(), ta.begin(), ta.end()))
          rep.add("C2", id + ":" + to_string(k) + ": '" + mover + "' at " +
                            history_to_string(th) + " in '" + t.game +
                            "' is aware of histories outside the level");
        History thbar = project(th, gwa.underlying);
        std::set<std::string> compatible;
        for (const auto& u : a)
          if (u.size() == thbar.size() + 1 && is_prefix(thbar, u))
            compatible.insert(u.back());
        const auto& actual_list = tg.base.moves_at(th);
        std::set<std::string> actual(actual_list.begin(), actual_list.end());
        if (compatible != actual)
          rep.add("C2", id + ":" + to_string(k) + ": move set at " +
                            history_to_string(th) + " in '" + t.game +
                            "' is not the awareness-compatible underlying set");
      }

      // C9: some anchor history is feasible in the target game.
      bool any_feasible = false;
      for (const auto& ah : anchor_set)
        if (feasible.at(t.game).count(ah)) any_feasible = true;
      if (!any_feasible)
        rep.add("C9", id + ":" + to_string(k) + ": no history of the anchor set " +
                          t.game + ":" + to_string(t.infoset) + " is feasible");
    }

    // C5 (path clause): the believed game can change along a player's own
    // path only together with the awareness level. The same-information-set
    // clause holds structurally (views are stored per information set).
    for (const auto& [h, a] : ag.awareness) {
      for (const auto& [h2, a2] : ag.awareness) {
        if (!is_strict_prefix(h, h2)) continue;
        if (ag.base.owner.at(h) != ag.base.owner.at(h2) || a != a2) continue;
        if (gwa.target(id, h).game != gwa.target(id, h2).game)
          rep.add("C5", id + ": believed game changes from " + history_to_string(h) +
                            " to " + history_to_string(h2) +
                            " with an unchanged awareness level");
      }
    }

    // C8: each anchor history replays the mover's own anchors and moves.
    for (const auto& k : ag.base.all_infosets()) {
      ViewTarget t = gwa.fmap.at({id, k});
      for (const auto& h : ag.base.infoset(k)) {
        auto here = own_anchor_trace(gwa, id, k.player, h);
        for (const auto& ah : gwa.game(t.game).base.infoset(t.infoset)) {
          if (own_anchor_trace(gwa, t.game, k.player, ah) != here) {
            rep.add("C8", id + ": " + history_to_string(h) + " and anchor history " +
                              history_to_string(ah) + " in '" + t.game +
                              "' disagree on '" + k.player + "''s own past");
          }
        }
      }
    }
  }

  if (gwa.claims_canonical) {
    std::set<History> full = gwa.underlying.histories;
    for (const auto& [h, a] : gwa.game(gwa.modeler).awareness)
      if (a != full)
        rep.add("canonical", "modeler awareness at " + history_to_string(h) +
                                 " is not the full underlying history set");
  }
  return rep;
}

std::set<History> feasible_histories(const GameWithAwareness& gwa,
                                     const std::string& gid) {
  const ExtensiveGame& g = gwa.game(gid).base;
  std::set<History> out;
  std::vector<History> queue{History{}};
  out.insert(History{});
  while (!queue.empty()) {
    History h = std::move(queue.back());
    queue.pop_back();
    if (g.is_terminal(h)) continue;
    const std::string& mover = g.owner.at(h);
    std::vector<std::string> allowed;
    if (mover == kChance) {
      allowed = g.moves_at(h);
    } else {
      ViewTarget t = gwa.target(gid, h);
      const ExtensiveGame& tg = gwa.game(t.game).base;
      for (const auto& m : g.moves_at(h)) {
        bool ok = true;
        for (const auto& h2 : tg.infoset(t.infoset)) {
          History ext = h2;
          ext.push_back(m);
          if (!tg.contains(ext)) ok = false;
        }
        if (ok) allowed.push_back(m);
      }
    }
    for (const auto& m : allowed) {
      History child = h;
      child.push_back(m);
      out.insert(child);
      queue.push_back(std::move(child));
    }
  }
  return out;
}

std::vector<GeneralizedInfoSet> generalized_info_sets(const GameWithAwareness& gwa) {
  std::map<ViewTarget, std::vector<std::pair<std::string, History>>> by_anchor;
  for (const auto& [id, ag] : gwa.games)
    for (const auto& [h, mover] : ag.base.owner)
      if (mover != kChance) by_anchor[gwa.target(id, h)].emplace_back(id, h);
  std::vector<GeneralizedInfoSet> out;
  for (auto& [anchor, members] : by_anchor) {
    std::sort(members.begin(), members.end());
    out.push_back({anchor, std::move(members)});
  }
  return out;
}

GameWithAwareness canonical(const ExtensiveGame& g) {
  GameWithAwareness out;
  out.underlying = g;
  out.underlying_id = "underlying";
  out.modeler = "m";
  out.claims_canonical = true;
  AugmentedGame ag;
  ag.id = "m";
  ag.base = g;
  ag.underlying_ref = out.underlying_id;
  for (const auto& [h, mover] : g.owner)
    if (mover != kChance) ag.awareness[h] = g.histories;
  out.games["m"] = std::move(ag);
  for (const auto& k : g.all_infosets()) out.fmap[{"m", k}] = {"m", k};
  return out;
}

std::vector<std::string> player_views(const GameWithAwareness& gwa,
                                      const std::string& player) {
  std::set<std::string> views;
  for (const auto& [key, t] : gwa.fmap)
    if (key.second.player == player) views.insert(t.game);
  return {views.begin(), views.end()};
}

}  // namespace gwa
