#include "doctest.h"
#include "gwa/extform.hpp"

#include <functional>

using namespace gwa;

namespace {

History h(std::initializer_list<const char*> moves) {
  History out;
  for (const char* m : moves) out.emplace_back(m);
  return out;
}

// Simultaneous matching pennies: 1 picks H/T, 2 picks h/t without observing.
ExtensiveGame matching_pennies() {
  ExtensiveGame g;
  g.players = {"1", "2"};
  g.histories = {h({}), h({"H"}), h({"T"}),
                 h({"H", "h"}), h({"H", "t"}), h({"T", "h"}), h({"T", "t"})};
  g.owner = {{h({}), "1"}, {h({"H"}), "2"}, {h({"T"}), "2"}};
  g.infosets["1"] = {{h({})}};
  g.infosets["2"] = {{h({"H"}), h({"T"})}};
  g.payoffs = {{h({"H", "h"}), {Rat(1), Rat(-1)}},
               {h({"H", "t"}), {Rat(-1), Rat(1)}},
               {h({"T", "h"}), {Rat(-1), Rat(1)}},
               {h({"T", "t"}), {Rat(1), Rat(-1)}}};
  g.reindex();
  return g;
}

// Chance picks a (1/3) or b (2/3); player 1 observes and picks l/r.
ExtensiveGame chance_then_choice() {
  ExtensiveGame g;
  g.players = {"1"};
  g.histories = {h({}), h({"a"}), h({"b"}),
                 h({"a", "l"}), h({"a", "r"}), h({"b", "l"}), h({"b", "r"})};
  g.owner = {{h({}), kChance}, {h({"a"}), "1"}, {h({"b"}), "1"}};
  g.chance[h({})] = {{"a", Rat(1, 3)}, {"b", Rat(2, 3)}};
  g.infosets["1"] = {{h({"a"})}, {h({"b"})}};
  g.payoffs = {{h({"a", "l"}), {Rat(6)}},
               {h({"a", "r"}), {Rat(0)}},
               {h({"b", "l"}), {Rat(0)}},
               {h({"b", "r"}), {Rat(3)}}};
  g.reindex();
  return g;
}

// Three-stage game exercising perfect recall: 1 moves, 2 moves unobserved
// by 1, then 1 moves again knowing only its own first move.
ExtensiveGame two_stage_game() {
  ExtensiveGame g;
  g.players = {"1", "2"};
  g.histories = {h({})};
  for (const char* a : {"A", "B"}) {
    g.histories.insert(h({a}));
    g.owner[h({a})] = "2";
    for (const char* b : {"x", "y"}) {
      g.histories.insert(h({a, b}));
      g.owner[h({a, b})] = "1";
      for (const char* c : {"u", "v"}) {
        History run{a, b, c};
        g.histories.insert(run);
        int score = (std::string(a) == "A") + (std::string(b) == "x") * 2 +
                    (std::string(c) == "u") * 4;
        g.payoffs[run] = {Rat(score), Rat(7 - score)};
      }
    }
  }
  g.owner[h({})] = "1";
  g.infosets["1"] = {{h({})},
                     {h({"A", "x"}), h({"A", "y"})},
                     {h({"B", "x"}), h({"B", "y"})}};
  g.infosets["2"] = {{h({"A"}), h({"B"})}};
  g.reindex();
  return g;
}

// Every pure strategy of `player`: one move per information set.
std::vector<BehavioralProfile> pure_strategies(const ExtensiveGame& g,
                                               const std::string& player) {
  std::vector<InfosetKey> keys;
  for (const auto& k : g.all_infosets())
    if (k.player == player) keys.push_back(k);
  std::vector<BehavioralProfile> out{{}};
  for (const auto& k : keys) {
    std::vector<BehavioralProfile> next;
    for (const auto& base : out)
      for (const auto& move : g.infoset_moves(k)) {
        BehavioralProfile s = base;
        s.dist[k] = {{move, Rat(1)}};
        next.push_back(std::move(s));
      }
    out = std::move(next);
  }
  return out;
}

BehavioralProfile merge(const BehavioralProfile& a, const BehavioralProfile& b) {
  BehavioralProfile out = a;
  for (const auto& [k, d] : b.dist) out.dist[k] = d;
  return out;
}

}  // namespace

TEST_CASE("well-formed games validate cleanly") {
  CHECK(validate_game(matching_pennies()).ok());
  CHECK(validate_game(chance_then_choice()).ok());
  CHECK(validate_game(two_stage_game()).ok());
}

TEST_CASE("validation flags structural defects") {
  SUBCASE("missing payoff") {
    auto g = matching_pennies();
    g.payoffs.erase(h({"T", "t"}));
    auto rep = validate_game(g);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.violations.front().code == "payoffs");
  }
  SUBCASE("chance probabilities must be strictly positive and sum to one") {
    auto g = chance_then_choice();
    g.chance[h({})] = {{"a", Rat(1)}, {"b", Rat(0)}};
    auto rep = validate_game(g);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.violations.front().code == "chance");
  }
  SUBCASE("uncovered decision node") {
    auto g = matching_pennies();
    g.infosets["2"] = {{h({"H"})}};
    g.reindex();
    CHECK_FALSE(validate_game(g).ok());
  }
  SUBCASE("move sets must agree inside an information set") {
    auto g = matching_pennies();
    g.histories.insert(h({"T", "w"}));
    g.payoffs[h({"T", "w"})] = {Rat(0), Rat(0)};
    g.reindex();
    CHECK_FALSE(validate_game(g).ok());
  }
  SUBCASE("perfect recall violation") {
    auto g = two_stage_game();
    // Pool 1's second-stage nodes across its own first move.
    g.infosets["1"] = {{h({})},
                       {h({"A", "x"}), h({"A", "y"}),
                        h({"B", "x"}), h({"B", "y"})}};
    g.reindex();
    auto rep = validate_game(g);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.violations.front().code == "perfect-recall");
  }
}

TEST_CASE("reach probabilities multiply move probabilities") {
  auto g = matching_pennies();
  BehavioralProfile sigma;
  sigma.dist[{"1", 0}] = {{"H", Rat(1, 4)}, {"T", Rat(3, 4)}};
  sigma.dist[{"2", 0}] = {{"h", Rat(2, 3)}, {"t", Rat(1, 3)}};
  CHECK(reach_prob(g, sigma, h({})) == Rat(1));
  CHECK(reach_prob(g, sigma, h({"T"})) == Rat(3, 4));
  CHECK(reach_prob(g, sigma, h({"T", "h"})) == Rat(1, 2));
  CHECK(cond_reach_prob(g, sigma, h({"T", "h"}), h({"T"})) == Rat(2, 3));
  CHECK(cond_reach_prob(g, sigma, h({"T", "h"}), h({"H"})) == Rat(0));
  CHECK(sigma.completely_mixed(g));
  sigma.dist[{"1", 0}] = {{"H", Rat(1)}};
  CHECK_FALSE(sigma.completely_mixed(g));
}

TEST_CASE("expected utility folds chance and strategies") {
  auto g = chance_then_choice();
  BehavioralProfile sigma;
  sigma.dist[{"1", 0}] = {{"l", Rat(1)}};          // after a
  sigma.dist[{"1", 1}] = {{"r", Rat(1, 2)}, {"l", Rat(1, 2)}};  // after b
  // 1/3 * 6 + 2/3 * (1/2 * 3) = 3.
  CHECK(ex_ante_utility(g, sigma, "1") == Rat(3));
  CHECK(best_response_value_ex_ante(g, sigma, "1") == Rat(4));
}

TEST_CASE("ex-ante best response matches pure-strategy enumeration") {
  auto g = two_stage_game();
  SplitMix64 rng(2024);
  auto rand_dist = [&](const std::vector<std::string>& moves) {
    std::map<std::string, Rat> d;
    Rat total(0);
    for (const auto& m : moves) {
      Rat w(1 + rng.below(5));
      d[m] = w;
      total += w;
    }
    for (auto& [m, w] : d) w /= total;
    return d;
  };
  for (int trial = 0; trial < 25; ++trial) {
    BehavioralProfile sigma;
    for (const auto& k : g.all_infosets()) sigma.dist[k] = rand_dist(g.infoset_moves(k));
    for (const auto& player : g.players) {
      Rat best(-1000);
      for (const auto& pure : pure_strategies(g, player)) {
        Rat v = ex_ante_utility(g, merge(sigma, pure), player);
        if (v > best) best = v;
      }
      CHECK(best_response_value_ex_ante(g, sigma, player) == best);
    }
  }
}

TEST_CASE("interim values weight beliefs over an information set") {
  auto g = two_stage_game();
  BehavioralProfile sigma;
  sigma.dist[{"1", 0}] = {{"A", Rat(1)}};
  sigma.dist[{"1", 1}] = {{"u", Rat(1)}};
  sigma.dist[{"1", 2}] = {{"v", Rat(1)}};
  sigma.dist[{"2", 0}] = {{"x", Rat(1, 2)}, {"y", Rat(1, 2)}};
  BeliefSystem mu;
  mu.beliefs[{"2", 0}] = {{h({"A"}), Rat(1, 3)}, {h({"B"}), Rat(2, 3)}};
  InfosetKey I{"2", 0};
  // Scores: A,x,u -> 7; A,y,u -> 5; B,x,v -> 2; B,y,v -> 0.
  // u_2 = 7 - score. 1/3*(1/2*0 + 1/2*2) + 2/3*(1/2*5 + 1/2*7) = 13/3.
  CHECK(expected_utility_at(g, sigma, mu, "2", I) == Rat(13, 3));
  // Replanning: x yields 1/3*0 + 2/3*5 = 10/3, y yields 1/3*2 + 2/3*7 = 16/3.
  CHECK(best_response_value(g, sigma, mu, "2", I) == Rat(16, 3));
  std::vector<History> only_b{h({"B"})};
  CHECK(expected_utility_at(g, sigma, mu, "2", I, &only_b) == Rat(4));
}

TEST_CASE("best response replans at the owner's later information sets") {
  auto g = two_stage_game();
  BehavioralProfile sigma;
  sigma.dist[{"1", 0}] = {{"B", Rat(1)}};
  sigma.dist[{"1", 1}] = {{"v", Rat(1)}};
  sigma.dist[{"1", 2}] = {{"v", Rat(1)}};
  sigma.dist[{"2", 0}] = {{"y", Rat(1)}};
  BeliefSystem root_belief;
  InfosetKey root{"1", 0};
  root_belief.beliefs[root] = {{h({}), Rat(1)}};
  // Free choice of A plus u at both later sets: 1 + 4 = 5, plus 2 if 2 had
  // played x; against y the best is A,y,u -> 5.
  CHECK(best_response_value(g, sigma, root_belief, "1", root) == Rat(5));
}

TEST_CASE("mixed matching pennies is a Nash equilibrium, pure play is not") {
  auto g = matching_pennies();
  BehavioralProfile mixed;
  mixed.dist[{"1", 0}] = {{"H", Rat(1, 2)}, {"T", Rat(1, 2)}};
  mixed.dist[{"2", 0}] = {{"h", Rat(1, 2)}, {"t", Rat(1, 2)}};
  auto res = check_nash(g, mixed);
  CHECK(res.ok);
  CHECK(res.slack.at("1") == Rat(0));
  CHECK(res.slack.at("2") == Rat(0));

  BehavioralProfile pure;
  pure.dist[{"1", 0}] = {{"H", Rat(1)}};
  pure.dist[{"2", 0}] = {{"h", Rat(1)}};
  auto bad = check_nash(g, pure);
  CHECK_FALSE(bad.ok);
  CHECK(bad.slack.at("2") == Rat(2));
  // Tolerance can absorb the slack.
  CHECK(check_nash(g, pure, Rat(2)).ok);
}

TEST_CASE("agent normal form has one player per information set") {
  auto g = two_stage_game();
  auto anf = to_agent_normal_form(g);
  REQUIRE(anf.agents.size() == 4);
  CHECK(anf.game.profile_count() == 16);
  // Spot-check one profile against a direct walk of the tree.
  std::vector<int> profile(4);
  for (std::size_t a = 0; a < anf.agents.size(); ++a) {
    const auto& moves = anf.game.strategies[a];
    profile[a] = static_cast<int>(moves.size()) - 1;
  }
  BehavioralProfile sigma;
  for (std::size_t a = 0; a < anf.agents.size(); ++a)
    sigma.dist[anf.agents[a]] = {
        {anf.game.strategies[a][static_cast<std::size_t>(profile[a])], Rat(1)}};
  for (std::size_t a = 0; a < anf.agents.size(); ++a)
    CHECK(anf.game.payoff(profile, static_cast<int>(a)) ==
          ex_ante_utility(g, sigma, anf.agents[a].player));
}

TEST_CASE("rational parsing round-trips") {
  CHECK(parse_rat("3/4") == Rat(3, 4));
  CHECK(parse_rat("-7") == Rat(-7));
  CHECK(rat_to_string(Rat(10, 4)) == "5/2");
  CHECK(rat_to_string(Rat(-3)) == "-3");
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("abc"), std::invalid_argument);
}
