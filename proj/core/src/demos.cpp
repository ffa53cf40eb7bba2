#include "gwa/demos.hpp"

#include <stdexcept>

namespace gwa::demos {

namespace {

const History kRoot{};

Rat r(long p, long q = 1) { return Rat(p, q); }

// Prisoner's dilemma tree, optionally with A's escape move. Both players'
// moves carry player-suffixed labels; B moves in one information set.
ExtensiveGame pd_tree(bool with_escape) {
  ExtensiveGame g;
  g.players = {"A", "B"};
  g.histories.insert(kRoot);
  g.owner[kRoot] = "A";
  for (const std::string a : {"C_A", "D_A"}) {
    g.histories.insert({a});
    g.owner[{a}] = "B";
    for (const std::string b : {"C_B", "D_B"}) g.histories.insert({a, b});
  }
  g.payoffs[{"C_A", "C_B"}] = {r(3), r(3)};
  g.payoffs[{"C_A", "D_B"}] = {r(0), r(4)};
  g.payoffs[{"D_A", "C_B"}] = {r(4), r(0)};
  g.payoffs[{"D_A", "D_B"}] = {r(1), r(1)};
  if (with_escape) {
    g.histories.insert({"E_A"});
    g.payoffs[{"E_A"}] = {r(5), r(1)};
  }
  g.infosets["A"] = {{kRoot}};
  g.infosets["B"] = {{{"C_A"}, {"D_A"}}};
  g.reindex();
  return g;
}

// A's subjective view of the escape dilemma: nature first decides whether
// B is unaware of the escape move, A cannot observe that choice.
ExtensiveGame gpd_view_of_a() {
  ExtensiveGame g;
  g.players = {"A", "B"};
  g.histories.insert(kRoot);
  g.owner[kRoot] = kChance;
  g.chance[kRoot] = {{"unaware_B", r(1, 2)}, {"aware_B", r(1, 2)}};
  for (const std::string n : {"unaware_B", "aware_B"}) {
    g.histories.insert({n});
    g.owner[{n}] = "A";
    g.histories.insert({n, "E_A"});
    g.payoffs[{n, "E_A"}] = {r(5), r(1)};
    for (const std::string a : {"C_A", "D_A"}) {
      g.histories.insert({n, a});
      g.owner[{n, a}] = "B";
      for (const std::string b : {"C_B", "D_B"}) g.histories.insert({n, a, b});
    }
    g.payoffs[{n, "C_A", "C_B"}] = {r(3), r(3)};
    g.payoffs[{n, "C_A", "D_B"}] = {r(0), r(4)};
    g.payoffs[{n, "D_A", "C_B"}] = {r(4), r(0)};
    g.payoffs[{n, "D_A", "D_B"}] = {r(1), r(1)};
  }
  g.infosets["A"] = {{{"unaware_B"}, {"aware_B"}}};
  g.infosets["B"] = {{{"unaware_B", "C_A"}, {"unaware_B", "D_A"}},
                     {{"aware_B", "C_A"}, {"aware_B", "D_A"}}};
  g.reindex();
  return g;
}

std::set<History> all_histories(const ExtensiveGame& g) {
  return g.histories;
}

std::set<History> histories_avoiding(const ExtensiveGame& g, const std::string& move) {
  std::set<History> out;
  for (const auto& h : g.histories) {
    bool hit = false;
    for (const auto& m : h)
      if (m == move) hit = true;
    if (!hit) out.insert(h);
  }
  return out;
}

ViewTarget anchor(const GameWithAwareness& w, const std::string& gid, const History& h) {
  return ViewTarget{gid, *w.game(gid).base.infoset_of(h)};
}

std::vector<Rat> tremble_schedule() {
  std::vector<Rat> out;
  Rat e(1, 10);
  for (int k = 0; k < 8; ++k) {
    out.push_back(e);
    e /= 10;
  }
  return out;
}

// Fig2 modeler tree; `merge_twos` puts player 2's nodes into one
// information set (the view attributed to an L-unaware player 2).
ExtensiveGame fig2_tree(bool merge_twos) {
  ExtensiveGame g;
  g.players = {"1", "2"};
  g.histories.insert(kRoot);
  g.owner[kRoot] = "1";
  for (const std::string a : {"L", "A"}) {
    g.histories.insert({a});
    g.owner[{a}] = "2";
    for (const std::string b : {"l", "r"}) g.histories.insert({a, b});
  }
  g.payoffs[{"L", "l"}] = {r(-10), r(-1)};
  g.payoffs[{"L", "r"}] = {r(2), r(-2)};
  g.payoffs[{"A", "l"}] = {r(1), r(0)};
  g.payoffs[{"A", "r"}] = {r(1), r(1)};
  g.infosets["1"] = {{kRoot}};
  if (merge_twos)
    g.infosets["2"] = {{{"A"}, {"L"}}};
  else
    g.infosets["2"] = {{{"A"}}, {{"L"}}};
  g.reindex();
  return g;
}

ExtensiveGame fig2_view_of_two() {
  ExtensiveGame g;
  g.players = {"1", "2"};
  g.histories.insert(kRoot);
  g.owner[kRoot] = "1";
  g.histories.insert({"A"});
  g.owner[{"A"}] = "2";
  g.histories.insert({"A", "l"});
  g.histories.insert({"A", "r"});
  g.payoffs[{"A", "l"}] = {r(1), r(0)};
  g.payoffs[{"A", "r"}] = {r(1), r(1)};
  g.infosets["1"] = {{kRoot}};
  g.infosets["2"] = {{{"A"}}};
  g.reindex();
  return g;
}

ExtensiveGame syn1_tree(bool with_m2) {
  ExtensiveGame g;
  g.players = {"1", "2"};
  g.histories.insert(kRoot);
  g.owner[kRoot] = "2";
  g.histories.insert({"m1"});
  g.owner[{"m1"}] = "1";
  g.histories.insert({"m1", "a"});
  g.histories.insert({"m1", "b"});
  g.payoffs[{"m1", "a"}] = {r(2), r(1)};
  g.payoffs[{"m1", "b"}] = {r(1), r(1)};
  if (with_m2) {
    g.histories.insert({"m2"});
    g.payoffs[{"m2"}] = {r(0), r(2)};
  }
  g.infosets["1"] = {{{"m1"}}};
  g.infosets["2"] = {{kRoot}};
  g.reindex();
  return g;
}

NormalFormGame make_nf(std::vector<std::string> players,
                       std::vector<std::vector<std::string>> strategies,
                       std::vector<std::vector<Rat>> payoffs) {
  NormalFormGame nf;
  nf.players = std::move(players);
  nf.strategies = std::move(strategies);
  nf.payoffs = std::move(payoffs);
  return nf;
}

}  // namespace

ExtensiveGame fig1() {
  ExtensiveGame g;
  g.players = {"A", "B"};
  g.histories = {kRoot, {"down_A"}, {"across_A"}, {"across_A", "down_B"},
                 {"across_A", "across_B"}};
  g.owner[kRoot] = "A";
  g.owner[{"across_A"}] = "B";
  g.payoffs[{"down_A"}] = {r(1), r(3)};
  g.payoffs[{"across_A", "down_B"}] = {r(2), r(2)};
  g.payoffs[{"across_A", "across_B"}] = {r(0), r(0)};
  g.infosets["A"] = {{kRoot}};
  g.infosets["B"] = {{{"across_A"}}};
  g.reindex();
  return g;
}

GameWithAwareness canonical_fig1() { return canonical(fig1()); }

GameWithAwareness gpd() {
  GameWithAwareness w;
  w.underlying = pd_tree(true);
  w.underlying_id = "underlying";
  w.modeler = "gamma-m";

  AugmentedGame gm;
  gm.id = "gamma-m";
  gm.base = pd_tree(true);
  gm.underlying_ref = "underlying";
  std::set<History> full = all_histories(w.underlying);
  std::set<History> no_escape = histories_avoiding(w.underlying, "E_A");
  gm.awareness[kRoot] = full;
  gm.awareness[{"C_A"}] = full;
  gm.awareness[{"D_A"}] = full;

  AugmentedGame ga;
  ga.id = "gamma-A";
  ga.base = gpd_view_of_a();
  ga.underlying_ref = "underlying";
  for (const std::string n : {"unaware_B", "aware_B"}) {
    ga.awareness[{n}] = full;
    ga.awareness[{n, "C_A"}] = n == "unaware_B" ? no_escape : full;
    ga.awareness[{n, "D_A"}] = n == "unaware_B" ? no_escape : full;
  }

  AugmentedGame gb1;
  gb1.id = "gamma-B1";
  gb1.base = pd_tree(false);
  gb1.underlying_ref = "underlying";
  gb1.awareness[kRoot] = no_escape;
  gb1.awareness[{"C_A"}] = no_escape;
  gb1.awareness[{"D_A"}] = no_escape;

  AugmentedGame gb2;
  gb2.id = "gamma-B2";
  gb2.base = pd_tree(true);
  gb2.underlying_ref = "underlying";
  gb2.awareness[kRoot] = full;
  gb2.awareness[{"C_A"}] = full;
  gb2.awareness[{"D_A"}] = full;

  w.games.emplace(gm.id, gm);
  w.games.emplace(ga.id, ga);
  w.games.emplace(gb1.id, gb1);
  w.games.emplace(gb2.id, gb2);

  auto key = [&](const std::string& gid, const History& h) {
    return std::make_pair(gid, *w.game(gid).base.infoset_of(h));
  };
  w.fmap[key("gamma-m", kRoot)] = anchor(w, "gamma-A", {"unaware_B"});
  w.fmap[key("gamma-m", {"C_A"})] = anchor(w, "gamma-B2", {"C_A"});
  w.fmap[key("gamma-A", {"unaware_B"})] = anchor(w, "gamma-A", {"unaware_B"});
  w.fmap[key("gamma-A", {"unaware_B", "C_A"})] = anchor(w, "gamma-B1", {"C_A"});
  w.fmap[key("gamma-A", {"aware_B", "C_A"})] = anchor(w, "gamma-B2", {"C_A"});
  w.fmap[key("gamma-B1", kRoot)] = anchor(w, "gamma-B1", kRoot);
  w.fmap[key("gamma-B1", {"C_A"})] = anchor(w, "gamma-B1", {"C_A"});
  w.fmap[key("gamma-B2", kRoot)] = anchor(w, "gamma-B2", kRoot);
  w.fmap[key("gamma-B2", {"C_A"})] = anchor(w, "gamma-B2", {"C_A"});
  return w;
}

GameWithAwareness fig2() {
  GameWithAwareness w;
  w.underlying = fig2_tree(false);
  w.underlying_id = "underlying";
  w.modeler = "gamma-m";

  std::set<History> full = all_histories(w.underlying);
  std::set<History> no_l = histories_avoiding(w.underlying, "L");

  AugmentedGame gm;
  gm.id = "gamma-m";
  gm.base = fig2_tree(false);
  gm.underlying_ref = "underlying";
  gm.awareness[kRoot] = full;
  gm.awareness[{"A"}] = full;
  gm.awareness[{"L"}] = full;

  AugmentedGame g11;
  g11.id = "gamma-1.1";
  g11.base = fig2_tree(true);
  g11.underlying_ref = "underlying";
  g11.awareness[kRoot] = full;
  g11.awareness[{"A"}] = no_l;
  g11.awareness[{"L"}] = no_l;

  AugmentedGame g22;
  g22.id = "gamma-2.2";
  g22.base = fig2_view_of_two();
  g22.underlying_ref = "underlying";
  g22.awareness[kRoot] = no_l;
  g22.awareness[{"A"}] = no_l;

  w.games.emplace(gm.id, gm);
  w.games.emplace(g11.id, g11);
  w.games.emplace(g22.id, g22);

  auto key = [&](const std::string& gid, const History& h) {
    return std::make_pair(gid, *w.game(gid).base.infoset_of(h));
  };
  w.fmap[key("gamma-m", kRoot)] = anchor(w, "gamma-1.1", kRoot);
  w.fmap[key("gamma-m", {"A"})] = anchor(w, "gamma-m", {"A"});
  w.fmap[key("gamma-m", {"L"})] = anchor(w, "gamma-m", {"L"});
  w.fmap[key("gamma-1.1", kRoot)] = anchor(w, "gamma-1.1", kRoot);
  w.fmap[key("gamma-1.1", {"A"})] = anchor(w, "gamma-2.2", {"A"});
  w.fmap[key("gamma-2.2", kRoot)] = anchor(w, "gamma-2.2", kRoot);
  w.fmap[key("gamma-2.2", {"A"})] = anchor(w, "gamma-2.2", {"A"});
  return w;
}

GameWithAwareness syn1() {
  GameWithAwareness w;
  w.underlying = syn1_tree(true);
  w.underlying_id = "underlying";
  w.modeler = "gamma-m";

  std::set<History> full = all_histories(w.underlying);
  std::set<History> no_m2 = histories_avoiding(w.underlying, "m2");

  AugmentedGame gm;
  gm.id = "gamma-m";
  gm.base = syn1_tree(true);
  gm.underlying_ref = "underlying";
  gm.awareness[kRoot] = no_m2;
  gm.awareness[{"m1"}] = full;

  AugmentedGame g2;
  g2.id = "gamma-2";
  g2.base = syn1_tree(false);
  g2.underlying_ref = "underlying";
  g2.awareness[kRoot] = no_m2;
  g2.awareness[{"m1"}] = no_m2;

  w.games.emplace(gm.id, gm);
  w.games.emplace(g2.id, g2);

  auto key = [&](const std::string& gid, const History& h) {
    return std::make_pair(gid, *w.game(gid).base.infoset_of(h));
  };
  w.fmap[key("gamma-m", kRoot)] = anchor(w, "gamma-2", kRoot);
  w.fmap[key("gamma-m", {"m1"})] = anchor(w, "gamma-m", {"m1"});
  w.fmap[key("gamma-2", kRoot)] = anchor(w, "gamma-2", kRoot);
  w.fmap[key("gamma-2", {"m1"})] = anchor(w, "gamma-2", {"m1"});
  return w;
}

NormalFormGame pd_nf() {
  return make_nf({"1", "2"}, {{"C", "D"}, {"C", "D"}},
                 {{r(3), r(3)}, {r(0), r(4)}, {r(4), r(0)}, {r(1), r(1)}});
}

NormalFormGame mp() {
  return make_nf({"1", "2"}, {{"heads", "tails"}, {"heads", "tails"}},
                 {{r(1), r(-1)}, {r(-1), r(1)}, {r(-1), r(1)}, {r(1), r(-1)}});
}

NormalFormGame nbr3() {
  return make_nf({"1", "2"}, {{"B", "M", "T"}, {"L", "R"}},
                 {{r(1), r(0)},
                  {r(1), r(0)},
                  {r(0), r(0)},
                  {r(3), r(1)},
                  {r(3), r(1)},
                  {r(0), r(0)}});
}

std::vector<std::string> extensive_names() { return {"fig1"}; }
std::vector<std::string> family_names() {
  return {"canonical-fig1", "fig2", "gpd", "syn1"};
}
std::vector<std::string> normal_names() { return {"mp", "nbr3", "pd-nf"}; }

ExtensiveGame extensive(const std::string& name) {
  if (name == "fig1") return fig1();
  throw std::invalid_argument("unknown extensive demo '" + name + "'");
}

GameWithAwareness family(const std::string& name) {
  if (name == "canonical-fig1") return canonical_fig1();
  if (name == "fig2") return fig2();
  if (name == "gpd") return gpd();
  if (name == "syn1") return syn1();
  throw std::invalid_argument("unknown awareness demo '" + name + "'");
}

NormalFormGame normal(const std::string& name) {
  if (name == "pd-nf") return pd_nf();
  if (name == "mp") return mp();
  if (name == "nbr3") return nbr3();
  throw std::invalid_argument("unknown normal-form demo '" + name + "'");
}

GeneralizedAssessment gpd_defect_ea() {
  GameWithAwareness w = gpd();
  ViewTarget tA = anchor(w, "gamma-A", {"unaware_B"});
  ViewTarget tAB1 = anchor(w, "gamma-B1", kRoot);
  ViewTarget tAB2 = anchor(w, "gamma-B2", kRoot);
  ViewTarget tBB1 = anchor(w, "gamma-B1", {"C_A"});
  ViewTarget tBB2 = anchor(w, "gamma-B2", {"C_A"});

  GeneralizedAssessment a;
  a.profile.dist[tA] = {{"E_A", r(1)}};
  a.profile.dist[tAB1] = {{"D_A", r(1)}};
  a.profile.dist[tAB2] = {{"E_A", r(1)}};
  a.profile.dist[tBB1] = {{"D_B", r(1)}};
  a.profile.dist[tBB2] = {{"D_B", r(1)}};

  a.beliefs.beliefs[tA] = {{{"unaware_B"}, r(1, 2)}, {{"aware_B"}, r(1, 2)}};
  a.beliefs.beliefs[tAB1] = {{kRoot, r(1)}};
  a.beliefs.beliefs[tAB2] = {{kRoot, r(1)}};
  a.beliefs.beliefs[tBB1] = {{{"C_A"}, r(0)}, {{"D_A"}, r(1)}};
  a.beliefs.beliefs[tBB2] = {{{"C_A"}, r(1, 2)}, {{"D_A"}, r(1, 2)}};
  return a;
}

GeneralizedCertificate gpd_defect_ea_cert() {
  GameWithAwareness w = gpd();
  ViewTarget tA = anchor(w, "gamma-A", {"unaware_B"});
  ViewTarget tAB1 = anchor(w, "gamma-B1", kRoot);
  ViewTarget tAB2 = anchor(w, "gamma-B2", kRoot);
  ViewTarget tBB1 = anchor(w, "gamma-B1", {"C_A"});
  ViewTarget tBB2 = anchor(w, "gamma-B2", {"C_A"});

  GeneralizedCertificate cert;
  cert.epsilons = tremble_schedule();
  for (const Rat& e : cert.epsilons) {
    GeneralizedCertificate::Step step;
    step.profile.dist[tA] = {{"C_A", e}, {"D_A", e}, {"E_A", 1 - 2 * e}};
    step.profile.dist[tAB1] = {{"C_A", e}, {"D_A", 1 - e}};
    step.profile.dist[tAB2] = {{"C_A", e}, {"D_A", e}, {"E_A", 1 - 2 * e}};
    step.profile.dist[tBB1] = {{"C_B", e}, {"D_B", 1 - e}};
    step.profile.dist[tBB2] = {{"C_B", e}, {"D_B", 1 - e}};
    cert.steps.push_back(std::move(step));
  }
  return cert;
}

namespace {

struct GluedKeys {
  NuGame nug;
  InfosetKey a_top, a_b1, a_b2, b_b1, b_b2;
};

GluedKeys glued_gpd() {
  GluedKeys k{build_nu(gpd(), uniform_nu(gpd())), {}, {}, {}, {}, {}};
  k.a_top = *k.nug.game.infoset_of({"gamma-m"});
  k.a_b1 = *k.nug.game.infoset_of({"gamma-B1"});
  k.a_b2 = *k.nug.game.infoset_of({"gamma-B2"});
  k.b_b1 = *k.nug.game.infoset_of({"gamma-B1", "C_A"});
  k.b_b2 = *k.nug.game.infoset_of({"gamma-B2", "C_A"});
  return k;
}

BehavioralProfile bad_cb_profile(const GluedKeys& k) {
  BehavioralProfile p;
  p.dist[k.a_top] = {{"E_A", Rat(1)}};
  p.dist[k.a_b1] = {{"D_A", Rat(1)}};
  p.dist[k.a_b2] = {{"E_A", Rat(1)}};
  p.dist[k.b_b1] = {{"D_B", Rat(1)}};
  p.dist[k.b_b2] = {{"C_B", Rat(1)}};
  return p;
}

}  // namespace

KAssessment gpd_nu_bad_cb_full() {
  GluedKeys k = glued_gpd();
  KAssessment a;
  a.profile = bad_cb_profile(k);
  a.beliefs.beliefs[k.a_top] = {{{"gamma-m"}, r(1, 2)},
                                {{"gamma-A", "unaware_B"}, r(1, 4)},
                                {{"gamma-A", "aware_B"}, r(1, 4)}};
  a.beliefs.beliefs[k.a_b1] = {{{"gamma-B1"}, r(1)}};
  a.beliefs.beliefs[k.a_b2] = {{{"gamma-B2"}, r(1)}};
  a.beliefs.beliefs[k.b_b1] = {{{"gamma-B1", "D_A"}, r(1)}};
  a.beliefs.beliefs[k.b_b2] = {{{"gamma-m", "C_A"}, r(1, 3)},
                               {{"gamma-m", "D_A"}, r(1, 3)},
                               {{"gamma-A", "aware_B", "C_A"}, r(1, 6)},
                               {{"gamma-A", "aware_B", "D_A"}, r(1, 6)}};
  return a;
}

KAssessment gpd_nu_bad_cb_restricted() {
  GluedKeys k = glued_gpd();
  KAssessment a;
  a.profile = bad_cb_profile(k);
  a.beliefs.beliefs[k.a_top] = {{{"gamma-A", "unaware_B"}, r(1, 2)},
                                {{"gamma-A", "aware_B"}, r(1, 2)}};
  a.beliefs.beliefs[k.a_b1] = {{{"gamma-B1"}, r(1)}};
  a.beliefs.beliefs[k.a_b2] = {{{"gamma-B2"}, r(1)}};
  a.beliefs.beliefs[k.b_b1] = {{{"gamma-B1", "D_A"}, r(1)}};
  a.beliefs.beliefs[k.b_b2] = {{{"gamma-B2", "C_A"}, r(1, 2)},
                               {{"gamma-B2", "D_A"}, r(1, 2)}};
  return a;
}

ConsistencyCertificate gpd_nu_bad_cb_cert() {
  GluedKeys k = glued_gpd();
  ConsistencyCertificate cert;
  cert.epsilons = tremble_schedule();
  for (const Rat& e : cert.epsilons) {
    Rat e2 = e * e;
    ConsistencyCertificate::Step step;
    step.profile.dist[k.a_top] = {{"C_A", e}, {"D_A", e}, {"E_A", 1 - 2 * e}};
    step.profile.dist[k.a_b1] = {{"C_A", e}, {"D_A", 1 - e}};
    step.profile.dist[k.a_b2] = {{"C_A", e2}, {"D_A", e2}, {"E_A", 1 - 2 * e2}};
    step.profile.dist[k.b_b1] = {{"C_B", e}, {"D_B", 1 - e}};
    step.profile.dist[k.b_b2] = {{"C_B", 1 - e}, {"D_B", e}};
    cert.steps.push_back(std::move(step));
  }
  return cert;
}

}  // namespace gwa::demos
