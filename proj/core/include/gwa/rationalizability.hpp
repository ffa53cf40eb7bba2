#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gwa/awareness.hpp"
#include "gwa/extform.hpp"
#include "gwa/nuglue.hpp"
#include "gwa/types.hpp"

namespace gwa {

// Pure strategies of everyone except one player, in ascending player order.
using OpponentProfile = std::vector<std::string>;

// A joint belief over opponent profiles against which `strategy` is a best
// response.
struct BeliefWitness {
  int player = 0;
  std::string strategy;
  std::map<OpponentProfile, Rat> pi;
};

// Cartesian product of the other players' listed strategy sets.
std::vector<OpponentProfile> opponent_profiles(
    const NormalFormGame& nf, int player,
    const std::vector<std::vector<std::string>>& sets);

// Expected payoff of a pure strategy under a belief over opponent profiles.
Rat belief_payoff(const NormalFormGame& nf, int player, const std::string& strategy,
                  const std::map<OpponentProfile, Rat>& pi);

// Searches for a belief with support inside `domain` making `strategy` weakly
// best among all of the player's strategies. Exact rational feasibility LP.
std::optional<BeliefWitness> witness_belief(const NormalFormGame& nf, int player,
                                            const std::string& strategy,
                                            const std::vector<OpponentProfile>& domain);

// Strategies admitting a witness belief over `domain`.
std::vector<std::string> best_response_set(const NormalFormGame& nf, int player,
                                           const std::vector<OpponentProfile>& domain);

struct RationalizableSets {
  std::vector<std::vector<std::string>> sets;  // per player, the fixpoint
  // Per iteration, per player; first entry is the full strategy space and
  // the last two entries coincide.
  std::vector<std::vector<std::vector<std::string>>> trace;
};

// Iterated elimination of never-best responses to correlated beliefs, plus
// a re-verification of the fixpoint property.
RationalizableSets rationalizable_sets(const NormalFormGame& nf);

// The normal form as a one-move-each extensive game in ascending player
// order, later movers seeing nothing.
ExtensiveGame nf_to_extensive(const NormalFormGame& nf);

// Awareness family whose subjective views encode the witness beliefs that
// rationalize each player's strategies: a modeler view plus one view per
// (player, rationalizable strategy), where nature plays that strategy's
// witness belief and the player cannot see nature's choice.
GameWithAwareness build_gamma_star(const NormalFormGame& nf,
                                   const std::vector<std::string>& s);

// Name of the view encoding the witness for (player index, strategy).
std::string view_id(const NormalFormGame& nf, int player, const std::string& strategy);

// Reads a local strategy back as a normal-form strategy via the player's
// unique information set in that view. Throws if the view gives the player
// more than one information set.
std::map<std::string, Rat> underline_strategy(const GameWithAwareness& w,
                                              const std::string& player,
                                              const std::string& gid,
                                              const GeneralizedStrategyProfile& gp);

struct EquilibriumRationalizabilityResult {
  // The profile where each view's owner plays the strategy the view encodes,
  // and whether it is a generalized Nash equilibrium.
  bool part_i = false;
  GeneralizedStrategyProfile equilibrium;
  // Whether every pure generalized Nash equilibrium uses only rationalizable
  // strategies, checked by exhaustive enumeration.
  bool part_ii = false;
  std::size_t enumerated = 0;
};

// Both directions of the equilibrium/rationalizability correspondence on
// the witness family of `s`. Refuses enumerations above `cap` profiles.
EquilibriumRationalizabilityResult verify_equilibrium_rationalizability(
    const NormalFormGame& nf, const std::vector<std::string>& s,
    std::size_t cap = 1000000);

}  // namespace gwa
