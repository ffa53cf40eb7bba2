#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gwa/awareness.hpp"
#include "gwa/extform.hpp"
#include "gwa/types.hpp"

namespace gwa {

// One local strategy value per anchor: a distribution over the anchor
// information set's moves. The anchor identifies both the generalized
// information set and the (player, game) pair owning the local strategy,
// so constancy across a generalized information set is structural.
struct GeneralizedStrategyProfile {
  std::map<ViewTarget, std::map<std::string, Rat>> dist;

  Rat prob(const ViewTarget& anchor, const std::string& move) const;
};

// Beliefs per generalized information set, supported on the anchor game's
// histories inside the anchor information set.
struct GeneralizedBeliefSystem {
  std::map<ViewTarget, std::map<History, Rat>> beliefs;
};

// The glued game: a chance root picking a view, each view's feasible tree
// hanging below it, and every generalized information set welded into one
// information set of the temporary player (player, view game).
struct NuGame {
  ExtensiveGame game;
  std::map<std::string, Rat> nu;             // view game id -> prior weight
  PossibilitySystem possibility;             // anchor-game members only
  std::map<InfosetKey, ViewTarget> anchor_of;
  // temporary player name -> (underlying player, view game id)
  std::map<std::string, std::pair<std::string, std::string>> player_origin;

  static std::string player_name(const std::string& player, const std::string& gid) {
    return player + "@" + gid;
  }
  // Splits a glued history into (view game id, history within that view).
  std::pair<std::string, History> origin(const History& h) const;
};

// Uniform strictly positive prior over the family.
std::map<std::string, Rat> uniform_nu(const GameWithAwareness& gwa);

// Builds the glued game for a validated family and strictly positive prior.
// Throws std::invalid_argument on bad inputs and std::logic_error if the
// glued game fails validation.
NuGame build_nu(const GameWithAwareness& gwa, const std::map<std::string, Rat>& nu);

// Strategy transport between the family and the glued game. Mutually
// inverse on anchors that survive feasibility pruning.
BehavioralProfile lift_strategy(const GeneralizedStrategyProfile& gp, const NuGame& nug);
GeneralizedStrategyProfile lower_strategy(const NuGame& nug, const BehavioralProfile& sigma);

// Belief transport; glued-side beliefs live on the possibility system.
// Throws std::invalid_argument when support leaves it.
BeliefSystem lift_beliefs(const GeneralizedBeliefSystem& gb, const NuGame& nug);
GeneralizedBeliefSystem lower_beliefs(const NuGame& nug, const BeliefSystem& mu);

struct GeneralizedNashResult {
  bool ok = false;
  // slack per (player, view game id)
  std::map<std::pair<std::string, std::string>, Rat> slack;
};

// Every local strategy must maximize its owner's expected payoff inside its
// own view game, all other local strategies held fixed. Computed both
// directly in each view and through the glued game; the two computations
// must agree exactly (std::logic_error otherwise).
GeneralizedNashResult check_generalized_nash(const GameWithAwareness& gwa,
                                             const GeneralizedStrategyProfile& gp,
                                             const std::map<std::string, Rat>& nu = {});

}  // namespace gwa
