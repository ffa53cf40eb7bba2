#include "gwa/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gwa {

namespace {

// Re-raises JSON access errors (missing keys, wrong types) as input errors.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

const Json& require(const Json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument("missing field '" + key + "'");
  return *it;
}

Json infoset_key_json(const InfosetKey& k) {
  return Json{{"player", k.player}, {"index", k.index}};
}

InfosetKey infoset_key_from_json(const Json& j) {
  return InfosetKey{require(j, "player").get<std::string>(),
                    require(j, "index").get<int>()};
}

Json view_target_json(const ViewTarget& t) {
  return Json{{"game", t.game},
              {"player", t.infoset.player},
              {"index", t.infoset.index}};
}

ViewTarget view_target_from_json(const Json& j) {
  return ViewTarget{require(j, "game").get<std::string>(),
                    {require(j, "player").get<std::string>(),
                     require(j, "index").get<int>()}};
}

Json dist_json(const std::map<std::string, Rat>& d) {
  Json out = Json::object();
  for (const auto& [m, p] : d) out[m] = rat_to_string(p);
  return out;
}

std::map<std::string, Rat> dist_from_json(const Json& j) {
  std::map<std::string, Rat> out;
  for (auto it = j.begin(); it != j.end(); ++it)
    out[it.key()] = rat_from_json(it.value());
  return out;
}

Json node_json(const ExtensiveGame& g, const History& h) {
  Json node = Json::object();
  if (g.is_terminal(h)) {
    Json pay = Json::array();
    for (const auto& u : g.payoffs.at(h)) pay.push_back(rat_to_string(u));
    node["payoffs"] = std::move(pay);
    return node;
  }
  node["owner"] = g.owner.at(h);
  auto ch = g.chance.find(h);
  if (ch != g.chance.end()) node["chance"] = dist_json(ch->second);
  std::vector<std::string> labels = g.moves_at(h);
  std::sort(labels.begin(), labels.end());
  Json moves = Json::object();
  for (const auto& m : labels) {
    History child = h;
    child.push_back(m);
    moves[m] = node_json(g, child);
  }
  node["moves"] = std::move(moves);
  return node;
}

void node_from_json(const Json& node, const History& h, ExtensiveGame& g) {
  g.histories.insert(h);
  if (node.contains("payoffs")) {
    std::vector<Rat> pay;
    for (const auto& u : node.at("payoffs")) pay.push_back(rat_from_json(u));
    g.payoffs[h] = std::move(pay);
    return;
  }
  g.owner[h] = require(node, "owner").get<std::string>();
  if (node.contains("chance")) g.chance[h] = dist_from_json(node.at("chance"));
  const Json& moves = require(node, "moves");
  for (auto it = moves.begin(); it != moves.end(); ++it) {
    History child = h;
    child.push_back(it.key());
    node_from_json(it.value(), child, g);
  }
}

Json infosets_json(const ExtensiveGame& g) {
  Json out = Json::object();
  for (const auto& p : g.players) {
    Json cells = Json::array();
    auto it = g.infosets.find(p);
    if (it != g.infosets.end())
      for (const auto& cell : it->second) {
        Json members = Json::array();
        for (const auto& h : cell) members.push_back(history_json(h));
        cells.push_back(std::move(members));
      }
    out[p] = std::move(cells);
  }
  return out;
}

}  // namespace

Json rat_json(const Rat& r) { return Json(rat_to_string(r)); }

Rat rat_from_json(const Json& j) {
  return guarded("rational", [&] { return parse_rat(j.get<std::string>()); });
}

Json history_json(const History& h) {
  Json out = Json::array();
  for (const auto& m : h) out.push_back(m);
  return out;
}

History history_from_json(const Json& j) {
  return guarded("history", [&] {
    History out;
    for (const auto& m : j) out.push_back(m.get<std::string>());
    return out;
  });
}

Json game_to_json(const ExtensiveGame& g) {
  Json out = Json::object();
  out["players"] = g.players;
  out["root"] = node_json(g, History{});
  out["infosets"] = infosets_json(g);
  return out;
}

ExtensiveGame game_from_json(const Json& j) {
  return guarded("game", [&] {
    ExtensiveGame g;
    g.players = require(j, "players").get<std::vector<std::string>>();
    node_from_json(require(j, "root"), History{}, g);
    const Json& sets = require(j, "infosets");
    for (auto it = sets.begin(); it != sets.end(); ++it) {
      std::vector<std::vector<History>> cells;
      for (const auto& cell : it.value()) {
        std::vector<History> members;
        for (const auto& h : cell) members.push_back(history_from_json(h));
        cells.push_back(std::move(members));
      }
      g.infosets[it.key()] = std::move(cells);
    }
    g.reindex();
    return g;
  });
}

Json family_to_json(const GameWithAwareness& w) {
  Json out = Json::object();
  out["underlying_id"] = w.underlying_id;
  out["underlying"] = game_to_json(w.underlying);
  out["modeler"] = w.modeler;
  out["canonical"] = w.claims_canonical;
  Json games = Json::array();
  for (const auto& [id, ag] : w.games) {
    Json entry = Json::object();
    entry["id"] = id;
    entry["underlying_ref"] = ag.underlying_ref;
    entry["game"] = game_to_json(ag.base);
    Json awareness = Json::array();
    for (const auto& [h, level] : ag.awareness) {
      Json rec = Json::object();
      rec["history"] = history_json(h);
      Json lv = Json::array();
      for (const auto& u : level) lv.push_back(history_json(u));
      rec["level"] = std::move(lv);
      awareness.push_back(std::move(rec));
    }
    entry["awareness"] = std::move(awareness);
    games.push_back(std::move(entry));
  }
  out["games"] = std::move(games);
  Json fmap = Json::array();
  for (const auto& [key, t] : w.fmap) {
    Json rec = Json::object();
    rec["game"] = key.first;
    rec["infoset"] = infoset_key_json(key.second);
    rec["target_game"] = t.game;
    rec["target_infoset"] = infoset_key_json(t.infoset);
    fmap.push_back(std::move(rec));
  }
  out["F"] = std::move(fmap);
  return out;
}

GameWithAwareness family_from_json(const Json& j) {
  return guarded("family", [&] {
    GameWithAwareness w;
    w.underlying_id = require(j, "underlying_id").get<std::string>();
    w.underlying = game_from_json(require(j, "underlying"));
    w.modeler = require(j, "modeler").get<std::string>();
    w.claims_canonical = require(j, "canonical").get<bool>();
    for (const auto& entry : require(j, "games")) {
      AugmentedGame ag;
      ag.id = require(entry, "id").get<std::string>();
      ag.underlying_ref = require(entry, "underlying_ref").get<std::string>();
      ag.base = game_from_json(require(entry, "game"));
      for (const auto& rec : require(entry, "awareness")) {
        std::set<History> level;
        for (const auto& u : require(rec, "level"))
          level.insert(history_from_json(u));
        ag.awareness[history_from_json(require(rec, "history"))] = std::move(level);
      }
      std::string id = ag.id;
      w.games.emplace(std::move(id), std::move(ag));
    }
    for (const auto& rec : require(j, "F"))
      w.fmap[{require(rec, "game").get<std::string>(),
              infoset_key_from_json(require(rec, "infoset"))}] =
          ViewTarget{require(rec, "target_game").get<std::string>(),
                     infoset_key_from_json(require(rec, "target_infoset"))};
    return w;
  });
}

Json glued_to_json(const NuGame& n) {
  Json out = Json::object();
  out["game"] = game_to_json(n.game);
  Json nu = Json::object();
  for (const auto& [gid, p] : n.nu) nu[gid] = rat_to_string(p);
  out["nu"] = std::move(nu);
  out["possibility"] = possibility_to_json(n.possibility);
  Json anchors = Json::array();
  for (const auto& [k, t] : n.anchor_of) {
    Json rec = Json::object();
    rec["infoset"] = infoset_key_json(k);
    rec["anchor"] = view_target_json(t);
    anchors.push_back(std::move(rec));
  }
  out["anchors"] = std::move(anchors);
  Json origin = Json::object();
  for (const auto& [name, pg] : n.player_origin)
    origin[name] = Json{{"player", pg.first}, {"view", pg.second}};
  out["player_origin"] = std::move(origin);
  return out;
}

NuGame glued_from_json(const Json& j) {
  return guarded("glued game", [&] {
    NuGame n;
    n.game = game_from_json(require(j, "game"));
    const Json& nu = require(j, "nu");
    for (auto it = nu.begin(); it != nu.end(); ++it)
      n.nu[it.key()] = rat_from_json(it.value());
    n.possibility = possibility_from_json(require(j, "possibility"));
    for (const auto& rec : require(j, "anchors"))
      n.anchor_of[infoset_key_from_json(require(rec, "infoset"))] =
          view_target_from_json(require(rec, "anchor"));
    const Json& origin = require(j, "player_origin");
    for (auto it = origin.begin(); it != origin.end(); ++it)
      n.player_origin[it.key()] = {require(it.value(), "player").get<std::string>(),
                                   require(it.value(), "view").get<std::string>()};
    return n;
  });
}

Json game_file(const ExtensiveGame& g) {
  Json out = Json::object();
  out["format"] = kGameFormat;
  out["type"] = "extensive";
  out["body"] = game_to_json(g);
  return out;
}

Json family_file(const GameWithAwareness& w) {
  Json out = Json::object();
  out["format"] = kGameFormat;
  out["type"] = "awareness";
  out["body"] = family_to_json(w);
  return out;
}

Json glued_file(const NuGame& n) {
  Json out = Json::object();
  out["format"] = kGameFormat;
  out["type"] = "glued";
  out["body"] = glued_to_json(n);
  return out;
}

LoadedGame load_game_file(const Json& j) {
  return guarded("game file", [&] {
    if (require(j, "format").get<std::string>() != kGameFormat)
      throw std::invalid_argument("unsupported game file format");
    LoadedGame out;
    std::string type = require(j, "type").get<std::string>();
    const Json& body = require(j, "body");
    if (type == "extensive")
      out.extensive = game_from_json(body);
    else if (type == "awareness")
      out.family = family_from_json(body);
    else if (type == "glued")
      out.glued = glued_from_json(body);
    else
      throw std::invalid_argument("unknown game file type '" + type + "'");
    return out;
  });
}

Json profile_to_json(const BehavioralProfile& p) {
  Json out = Json::array();
  for (const auto& [k, d] : p.dist) {
    Json rec = Json::object();
    rec["infoset"] = infoset_key_json(k);
    rec["dist"] = dist_json(d);
    out.push_back(std::move(rec));
  }
  return out;
}

BehavioralProfile profile_from_json(const Json& j) {
  return guarded("profile", [&] {
    BehavioralProfile p;
    for (const auto& rec : j)
      p.dist[infoset_key_from_json(require(rec, "infoset"))] =
          dist_from_json(require(rec, "dist"));
    return p;
  });
}

Json beliefs_to_json(const BeliefSystem& b) {
  Json out = Json::array();
  for (const auto& [k, w] : b.beliefs) {
    Json rec = Json::object();
    rec["infoset"] = infoset_key_json(k);
    Json weights = Json::array();
    for (const auto& [h, p] : w) {
      Json entry = Json::object();
      entry["history"] = history_json(h);
      entry["p"] = rat_to_string(p);
      weights.push_back(std::move(entry));
    }
    rec["weights"] = std::move(weights);
    out.push_back(std::move(rec));
  }
  return out;
}

BeliefSystem beliefs_from_json(const Json& j) {
  return guarded("beliefs", [&] {
    BeliefSystem b;
    for (const auto& rec : j) {
      auto& w = b.beliefs[infoset_key_from_json(require(rec, "infoset"))];
      for (const auto& entry : require(rec, "weights"))
        w[history_from_json(require(entry, "history"))] =
            rat_from_json(require(entry, "p"));
    }
    return b;
  });
}

Json possibility_to_json(const PossibilitySystem& k) {
  Json out = Json::array();
  for (const auto& [key, hs] : k.possible) {
    Json rec = Json::object();
    rec["infoset"] = infoset_key_json(key);
    Json members = Json::array();
    for (const auto& h : hs) members.push_back(history_json(h));
    rec["histories"] = std::move(members);
    out.push_back(std::move(rec));
  }
  return out;
}

PossibilitySystem possibility_from_json(const Json& j) {
  return guarded("possibility system", [&] {
    PossibilitySystem k;
    for (const auto& rec : j) {
      auto& hs = k.possible[infoset_key_from_json(require(rec, "infoset"))];
      for (const auto& h : require(rec, "histories"))
        hs.push_back(history_from_json(h));
    }
    return k;
  });
}

Json certificate_to_json(const ConsistencyCertificate& c) {
  Json out = Json::object();
  Json eps = Json::array();
  for (const auto& e : c.epsilons) eps.push_back(rat_to_string(e));
  out["epsilons"] = std::move(eps);
  Json steps = Json::array();
  for (const auto& s : c.steps) {
    Json rec = Json::object();
    rec["profile"] = profile_to_json(s.profile);
    if (s.beliefs) rec["beliefs"] = beliefs_to_json(*s.beliefs);
    steps.push_back(std::move(rec));
  }
  out["steps"] = std::move(steps);
  out["tol_limit"] = rat_to_string(c.tol_limit);
  return out;
}

ConsistencyCertificate certificate_from_json(const Json& j) {
  return guarded("certificate", [&] {
    ConsistencyCertificate c;
    for (const auto& e : require(j, "epsilons")) c.epsilons.push_back(rat_from_json(e));
    for (const auto& rec : require(j, "steps")) {
      ConsistencyCertificate::Step s;
      s.profile = profile_from_json(require(rec, "profile"));
      if (rec.contains("beliefs")) s.beliefs = beliefs_from_json(rec.at("beliefs"));
      c.steps.push_back(std::move(s));
    }
    c.tol_limit = rat_from_json(require(j, "tol_limit"));
    return c;
  });
}

Json generalized_profile_to_json(const GeneralizedStrategyProfile& p) {
  Json out = Json::array();
  for (const auto& [t, d] : p.dist) {
    Json rec = Json::object();
    rec["anchor"] = view_target_json(t);
    rec["dist"] = dist_json(d);
    out.push_back(std::move(rec));
  }
  return out;
}

GeneralizedStrategyProfile generalized_profile_from_json(const Json& j) {
  return guarded("generalized profile", [&] {
    GeneralizedStrategyProfile p;
    for (const auto& rec : j)
      p.dist[view_target_from_json(require(rec, "anchor"))] =
          dist_from_json(require(rec, "dist"));
    return p;
  });
}

Json generalized_beliefs_to_json(const GeneralizedBeliefSystem& b) {
  Json out = Json::array();
  for (const auto& [t, w] : b.beliefs) {
    Json rec = Json::object();
    rec["anchor"] = view_target_json(t);
    Json weights = Json::array();
    for (const auto& [h, p] : w) {
      Json entry = Json::object();
      entry["history"] = history_json(h);
      entry["p"] = rat_to_string(p);
      weights.push_back(std::move(entry));
    }
    rec["weights"] = std::move(weights);
    out.push_back(std::move(rec));
  }
  return out;
}

GeneralizedBeliefSystem generalized_beliefs_from_json(const Json& j) {
  return guarded("generalized beliefs", [&] {
    GeneralizedBeliefSystem b;
    for (const auto& rec : j) {
      auto& w = b.beliefs[view_target_from_json(require(rec, "anchor"))];
      for (const auto& entry : require(rec, "weights"))
        w[history_from_json(require(entry, "history"))] =
            rat_from_json(require(entry, "p"));
    }
    return b;
  });
}

Json generalized_certificate_to_json(const GeneralizedCertificate& c) {
  Json out = Json::object();
  Json eps = Json::array();
  for (const auto& e : c.epsilons) eps.push_back(rat_to_string(e));
  out["epsilons"] = std::move(eps);
  Json steps = Json::array();
  for (const auto& s : c.steps) {
    Json rec = Json::object();
    rec["profile"] = generalized_profile_to_json(s.profile);
    steps.push_back(std::move(rec));
  }
  out["steps"] = std::move(steps);
  out["tol_limit"] = rat_to_string(c.tol_limit);
  return out;
}

GeneralizedCertificate generalized_certificate_from_json(const Json& j) {
  return guarded("generalized certificate", [&] {
    GeneralizedCertificate c;
    for (const auto& e : require(j, "epsilons")) c.epsilons.push_back(rat_from_json(e));
    for (const auto& rec : require(j, "steps"))
      c.steps.push_back({generalized_profile_from_json(require(rec, "profile"))});
    c.tol_limit = rat_from_json(require(j, "tol_limit"));
    return c;
  });
}

Json assessment_file(const KAssessment& a, const PossibilitySystem* k,
                     const ConsistencyCertificate* cert) {
  Json out = Json::object();
  out["format"] = kAssessmentFormat;
  out["profile"] = profile_to_json(a.profile);
  out["beliefs"] = beliefs_to_json(a.beliefs);
  if (k) out["possibility"] = possibility_to_json(*k);
  if (cert) out["certificate"] = certificate_to_json(*cert);
  return out;
}

Json generalized_assessment_file(const GeneralizedAssessment& a,
                                 const GeneralizedCertificate* cert) {
  Json out = Json::object();
  out["format"] = kAssessmentFormat;
  out["generalized_profile"] = generalized_profile_to_json(a.profile);
  out["generalized_beliefs"] = generalized_beliefs_to_json(a.beliefs);
  if (cert) out["generalized_certificate"] = generalized_certificate_to_json(*cert);
  return out;
}

AssessmentFile load_assessment_file(const Json& j) {
  return guarded("assessment file", [&] {
    if (require(j, "format").get<std::string>() != kAssessmentFormat)
      throw std::invalid_argument("unsupported assessment file format");
    AssessmentFile out;
    if (j.contains("profile")) {
      KAssessment a;
      a.profile = profile_from_json(j.at("profile"));
      a.beliefs = beliefs_from_json(require(j, "beliefs"));
      out.assessment = std::move(a);
    }
    if (j.contains("possibility"))
      out.possibility = possibility_from_json(j.at("possibility"));
    if (j.contains("certificate"))
      out.certificate = certificate_from_json(j.at("certificate"));
    if (j.contains("generalized_profile")) {
      GeneralizedAssessment a;
      a.profile = generalized_profile_from_json(j.at("generalized_profile"));
      a.beliefs = generalized_beliefs_from_json(require(j, "generalized_beliefs"));
      out.generalized = std::move(a);
    }
    if (j.contains("generalized_certificate"))
      out.generalized_certificate =
          generalized_certificate_from_json(j.at("generalized_certificate"));
    if (!out.assessment && !out.generalized)
      throw std::invalid_argument("assessment file carries no profile");
    return out;
  });
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("JSON parse error: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
  out << dump_json(j);
}

}  // namespace gwa
