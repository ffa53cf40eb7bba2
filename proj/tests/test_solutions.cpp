#include <algorithm>

#include "doctest.h"
#include "gwa/demos.hpp"
#include "gwa/solutions.hpp"

using namespace gwa;

namespace {

const History kRoot{};

ConsistencyCertificate tremble_cert(const ExtensiveGame& g, const BehavioralProfile& sigma) {
  ConsistencyCertificate cert;
  Rat e(1, 10);
  for (int k = 0; k < 8; ++k) {
    cert.epsilons.push_back(e);
    cert.steps.push_back({tremble(g, sigma, e), std::nullopt});
    e /= 10;
  }
  return cert;
}

KAssessment fig1_equilibrium() {
  ExtensiveGame g = demos::fig1();
  KAssessment a;
  a.profile.dist[*g.infoset_of(kRoot)] = {{"across_A", Rat(1)}};
  a.profile.dist[*g.infoset_of({"across_A"})] = {{"down_B", Rat(1)}};
  a.beliefs.beliefs[*g.infoset_of(kRoot)] = {{kRoot, Rat(1)}};
  a.beliefs.beliefs[*g.infoset_of({"across_A"})] = {{{"across_A"}, Rat(1)}};
  return a;
}

KAssessment fig1_quit() {
  ExtensiveGame g = demos::fig1();
  KAssessment a;
  a.profile.dist[*g.infoset_of(kRoot)] = {{"down_A", Rat(1)}};
  a.profile.dist[*g.infoset_of({"across_A"})] = {{"across_B", Rat(1)}};
  a.beliefs.beliefs[*g.infoset_of(kRoot)] = {{kRoot, Rat(1)}};
  a.beliefs.beliefs[*g.infoset_of({"across_A"})] = {{{"across_A"}, Rat(1)}};
  return a;
}

}  // namespace

TEST_CASE("possibility systems must equalize payoffs across excluded runs") {
  ExtensiveGame g = demos::fig1();
  CHECK(check_possibility_system(g, PossibilitySystem::full(g)));

  NuGame nug = build_nu(demos::gpd(), uniform_nu(demos::gpd()));
  CHECK(check_possibility_system(nug.game, nug.possibility));

  // Dropping a history of B's own view leaves runs with payoffs 3 and 4,
  // which the mover could tell apart.
  PossibilitySystem bad = nug.possibility;
  InfosetKey k = *nug.game.infoset_of({"gamma-B2", "C_A"});
  bad.possible[k] = {{"gamma-B2", "D_A"}};
  CHECK_FALSE(check_possibility_system(nug.game, bad));

  PossibilitySystem empty = nug.possibility;
  empty.possible[k].clear();
  CHECK_THROWS_AS((void)check_possibility_system(nug.game, empty),
                  std::invalid_argument);
}

TEST_CASE("sequential rationality separates the two fig1 Nash profiles") {
  ExtensiveGame g = demos::fig1();
  PossibilitySystem K = PossibilitySystem::full(g);
  auto good = check_sequential_rationality(g, K, fig1_equilibrium());
  CHECK(good.ok);
  for (const auto& [k, s] : good.slack) CHECK(s == 0);

  auto bad = check_sequential_rationality(g, K, fig1_quit());
  CHECK_FALSE(bad.ok);
  CHECK(bad.slack.at(*g.infoset_of({"across_A"})) == Rat(2));
}

TEST_CASE("derived beliefs condition the reach distribution") {
  ExtensiveGame g = demos::fig1();
  PossibilitySystem K = PossibilitySystem::full(g);
  BehavioralProfile sigma;
  sigma.dist[*g.infoset_of(kRoot)] = {{"across_A", Rat(1, 3)}, {"down_A", Rat(2, 3)}};
  sigma.dist[*g.infoset_of({"across_A"})] = {{"down_B", Rat(1, 2)},
                                             {"across_B", Rat(1, 2)}};
  BeliefSystem mu = beliefs_from_profile(g, K, sigma);
  CHECK(mu.at(*g.infoset_of({"across_A"}), {"across_A"}) == Rat(1));

  BehavioralProfile pure = fig1_equilibrium().profile;
  CHECK_THROWS_AS((void)beliefs_from_profile(g, K, pure), std::invalid_argument);
}

TEST_CASE("trembles are completely mixed and geometric") {
  ExtensiveGame g = demos::fig1();
  BehavioralProfile sigma = fig1_equilibrium().profile;
  BehavioralProfile t = tremble(g, sigma, Rat(1, 100));
  CHECK(t.completely_mixed(g));
  CHECK(t.prob(*g.infoset_of(kRoot), "down_A") == Rat(1, 100));
  CHECK(t.prob(*g.infoset_of(kRoot), "across_A") == Rat(99, 100));
}

TEST_CASE("limit beliefs pick the leading tremble order") {
  // Under the biased certificate the welded set's conditional beliefs tend
  // to (1/3, 1/3, 1/6, 1/6, 0, 0): the B2 branch trembles one order faster.
  NuGame nug = build_nu(demos::gpd(), uniform_nu(demos::gpd()));
  KAssessment a = demos::gpd_nu_bad_cb_full();
  ConsistencyCertificate cert = demos::gpd_nu_bad_cb_cert();
  InfosetKey k = *nug.game.infoset_of({"gamma-B2", "C_A"});
  PossibilitySystem full = PossibilitySystem::full(nug.game);

  BeliefSystem last =
      beliefs_from_profile(nug.game, full, cert.steps.back().profile);
  Rat d = last.at(k, {"gamma-m", "C_A"}) - a.beliefs.at(k, {"gamma-m", "C_A"});
  if (d < 0) d = -d;
  CHECK(d <= Rat(1, 1000000));
  CHECK(last.at(k, {"gamma-B2", "C_A"}) > 0);
}

TEST_CASE("exact limit beliefs match the certificate direction") {
  ExtensiveGame g = demos::fig1();
  PossibilitySystem K = PossibilitySystem::full(g);
  BehavioralProfile sigma = fig1_quit().profile;
  BeliefSystem mu = limit_beliefs(g, K, sigma);
  CHECK(mu.at(*g.infoset_of({"across_A"}), {"across_A"}) == Rat(1));
}

TEST_CASE("consistency accepts the matching certificate and rejects garbage") {
  ExtensiveGame g = demos::fig1();
  PossibilitySystem K = PossibilitySystem::full(g);
  KAssessment a = fig1_equilibrium();
  ConsistencyCertificate cert = tremble_cert(g, a.profile);
  CHECK(check_consistency(g, K, a, cert).ok);

  // Beliefs that never match the derived conditionals.
  KAssessment wrong = a;
  wrong.beliefs.beliefs[*g.infoset_of({"across_A"})] = {{{"across_A"}, Rat(1)}};
  wrong.beliefs.beliefs[*g.infoset_of(kRoot)] = {{kRoot, Rat(1)}};
  wrong.profile.dist[*g.infoset_of(kRoot)] = {{"down_A", Rat(1)}};
  ConsistencyCertificate against = tremble_cert(g, fig1_equilibrium().profile);
  CHECK_FALSE(check_consistency(g, K, wrong, against).ok);

  ConsistencyCertificate empty;
  CHECK_THROWS_AS((void)check_consistency(g, K, a, empty), std::invalid_argument);

  ConsistencyCertificate increasing = cert;
  std::reverse(increasing.epsilons.begin(), increasing.epsilons.end());
  CHECK_THROWS_AS((void)check_consistency(g, K, a, increasing),
                  std::invalid_argument);

  ConsistencyCertificate unmixed = cert;
  unmixed.steps.back().profile = a.profile;
  CHECK_THROWS_AS((void)check_consistency(g, K, a, unmixed), std::invalid_argument);
}

TEST_CASE("off-path cooperation survives the whole-set check only") {
  NuGame nug = build_nu(demos::gpd(), uniform_nu(demos::gpd()));
  PossibilitySystem full = PossibilitySystem::full(nug.game);
  ConsistencyCertificate cert = demos::gpd_nu_bad_cb_cert();

  CHECK(check_conditional_seq_eq(nug.game, full, demos::gpd_nu_bad_cb_full(), cert));
  CHECK_FALSE(check_conditional_seq_eq(nug.game, nug.possibility,
                                       demos::gpd_nu_bad_cb_restricted(), cert));
}

TEST_CASE("a point-mass belief on the other view is rational but inconsistent") {
  NuGame nug = build_nu(demos::gpd(), uniform_nu(demos::gpd()));
  PossibilitySystem full = PossibilitySystem::full(nug.game);
  KAssessment a = demos::gpd_nu_bad_cb_full();
  InfosetKey k = *nug.game.infoset_of({"gamma-B2", "C_A"});
  a.beliefs.beliefs[k] = {{{"gamma-A", "aware_B", "C_A"}, Rat(1)}};
  CHECK(check_sequential_rationality(nug.game, full, a).ok);
  // The chance prior ties this history's weight to the modeler-view copy,
  // so no tremble sequence concentrates on it alone.
  CHECK_FALSE(check_consistency(nug.game, full, a, demos::gpd_nu_bad_cb_cert()).ok);
}

TEST_CASE("extended beliefs upgrade a conditional equilibrium to a plain one") {
  NuGame nug = build_nu(demos::gpd(), uniform_nu(demos::gpd()));
  // The honest all-defect equilibrium on the glued game.
  GeneralizedAssessment ga = demos::gpd_defect_ea();
  GeneralizedCertificate gcert = demos::gpd_defect_ea_cert();
  KAssessment a{lift_strategy(ga.profile, nug), lift_beliefs(ga.beliefs, nug)};
  ConsistencyCertificate cert;
  cert.epsilons = gcert.epsilons;
  for (const auto& step : gcert.steps)
    cert.steps.push_back({lift_strategy(step.profile, nug), std::nullopt});

  REQUIRE(check_conditional_seq_eq(nug.game, nug.possibility, a, cert));
  BeliefSystem extended = extend_beliefs(nug.game, nug.possibility, a, cert);
  KAssessment plain{a.profile, extended};
  PossibilitySystem full = PossibilitySystem::full(nug.game);
  CHECK(check_conditional_seq_eq(nug.game, full, plain, cert));
  auto rat = check_sequential_rationality(nug.game, full, plain);
  for (const auto& [k, s] : rat.slack) CHECK(s == 0);
}

TEST_CASE("generalized sequential check on the escape dilemma") {
  CHECK(check_generalized_seq_eq(demos::gpd(), demos::gpd_defect_ea(),
                                 demos::gpd_defect_ea_cert()));

  // B's aware type cooperating fails inside his own view.
  GameWithAwareness w = demos::gpd();
  GeneralizedAssessment bad = demos::gpd_defect_ea();
  ViewTarget tBB2{"gamma-B2", *w.game("gamma-B2").base.infoset_of({"C_A"})};
  bad.profile.dist[tBB2] = {{"C_B", Rat(1)}};
  GeneralizedCertificate cert;
  cert.epsilons = demos::gpd_defect_ea_cert().epsilons;
  for (const Rat& e : cert.epsilons) {
    GeneralizedCertificate::Step step;
    for (const auto& [t, target] : bad.profile.dist) {
      const auto& moves = w.game(t.game).base.infoset_moves(t.infoset);
      int unsupported = 0;
      for (const auto& m : moves)
        if (!target.count(m)) ++unsupported;
      std::map<std::string, Rat> d;
      for (const auto& m : moves) {
        auto it = target.find(m);
        d[m] = it == target.end() ? e : it->second * (1 - Rat(unsupported) * e);
      }
      step.profile.dist[t] = d;
    }
    cert.steps.push_back(std::move(step));
  }
  CHECK_FALSE(check_generalized_seq_eq(w, bad, cert));
}

TEST_CASE("perfect equilibrium in the normal form") {
  NormalFormGame pd = demos::pd_nf();
  MixedProfile dd = {{{"D", Rat(1)}}, {{"D", Rat(1)}}};
  PerfectEqCertificate cert;
  Rat e(1, 10);
  for (int k = 0; k < 8; ++k) {
    cert.epsilons.push_back(e);
    cert.steps.push_back({{{"C", e}, {"D", 1 - e}}, {{"C", e}, {"D", 1 - e}}});
    e /= 10;
  }
  CHECK(check_perfect_equilibrium(pd, dd, cert));

  MixedProfile cc = {{{"C", Rat(1)}}, {{"C", Rat(1)}}};
  CHECK_FALSE(check_perfect_equilibrium(pd, cc, cert));

  NormalFormGame pennies = demos::mp();
  MixedProfile even = {{{"heads", Rat(1, 2)}, {"tails", Rat(1, 2)}},
                       {{"heads", Rat(1, 2)}, {"tails", Rat(1, 2)}}};
  PerfectEqCertificate mixed_cert;
  mixed_cert.epsilons = cert.epsilons;
  for (std::size_t i = 0; i < cert.epsilons.size(); ++i)
    mixed_cert.steps.push_back(even);
  CHECK(check_perfect_equilibrium(pennies, even, mixed_cert));
}

TEST_CASE("solver finds the unique fig1 equilibrium") {
  ExtensiveGame g = demos::fig1();
  auto [a, cert] = solve_conditional_seq_eq(g, PossibilitySystem::full(g));
  CHECK(a.profile.prob(*g.infoset_of(kRoot), "across_A") == Rat(1));
  CHECK(a.profile.prob(*g.infoset_of({"across_A"}), "down_B") == Rat(1));
}

TEST_CASE("solver on the glued escape dilemma defects everywhere") {
  NuGame nug = build_nu(demos::gpd(), uniform_nu(demos::gpd()));
  auto [a, cert] = solve_conditional_seq_eq(nug.game, nug.possibility);
  CHECK(a.profile.prob(*nug.game.infoset_of({"gamma-m"}), "E_A") == Rat(1));
  CHECK(a.profile.prob(*nug.game.infoset_of({"gamma-B2"}), "E_A") == Rat(1));
  CHECK(a.profile.prob(*nug.game.infoset_of({"gamma-B1"}), "D_A") == Rat(1));
  CHECK(a.profile.prob(*nug.game.infoset_of({"gamma-B1", "C_A"}), "D_B") == Rat(1));
  CHECK(a.profile.prob(*nug.game.infoset_of({"gamma-B2", "C_A"}), "D_B") == Rat(1));
}

TEST_CASE("generalized solver lowers to the family and re-verifies") {
  GameWithAwareness w = demos::gpd();
  auto [a, cert] = solve_generalized_seq_eq(w);
  ViewTarget tBB2{"gamma-B2", *w.game("gamma-B2").base.infoset_of({"C_A"})};
  ViewTarget tA{"gamma-A", *w.game("gamma-A").base.infoset_of({"unaware_B"})};
  CHECK(a.profile.prob(tBB2, "D_B") == Rat(1));
  CHECK(a.profile.prob(tA, "E_A") == Rat(1));
  CHECK(check_generalized_seq_eq(w, a, cert));
}

TEST_CASE("generalized solver solves the fig2 narrative") {
  GameWithAwareness w = demos::fig2();
  auto [a, cert] = solve_generalized_seq_eq(w);
  ViewTarget t11{"gamma-1.1", *w.game("gamma-1.1").base.infoset_of(kRoot)};
  ViewTarget t2m{"gamma-m", *w.game("gamma-m").base.infoset_of({"L"})};
  ViewTarget t22{"gamma-2.2", *w.game("gamma-2.2").base.infoset_of({"A"})};
  CHECK(a.profile.prob(t11, "L") == Rat(1));
  CHECK(a.profile.prob(t2m, "l") == Rat(1));
  CHECK(a.profile.prob(t22, "r") == Rat(1));
}
