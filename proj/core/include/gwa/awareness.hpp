#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gwa/extform.hpp"
#include "gwa/types.hpp"

namespace gwa {

// A subjective view of an underlying game: an extensive game (whose moves
// may include extra nature moves that shift awareness) plus, at every
// history where a player moves, the set of underlying histories that player
// is currently aware of.
struct AugmentedGame {
  std::string id;
  ExtensiveGame base;
  std::string underlying_ref;
  std::map<History, std::set<History>> awareness;
};

// Anchor of a view: the game a mover believes is real and the information
// set there that the mover considers itself to be in.
struct ViewTarget {
  std::string game;
  InfosetKey infoset;
  auto operator<=>(const ViewTarget&) const = default;
};

std::string to_string(const ViewTarget& t);

// A family of augmented games over one underlying game, one of which is the
// modeler's, plus the view map sending every mover's node to its anchor.
// The view map is stored per information set; constancy across a set is
// thereby structural.
struct GameWithAwareness {
  ExtensiveGame underlying;
  std::string underlying_id;
  std::map<std::string, AugmentedGame> games;
  std::string modeler;
  std::map<std::pair<std::string, InfosetKey>, ViewTarget> fmap;
  // Set when the structure is a canonical representation; the validator
  // then additionally requires full awareness in the modeler's game.
  bool claims_canonical = false;

  const AugmentedGame& game(const std::string& id) const;
  // Anchor of the mover at history h of game gid.
  ViewTarget target(const std::string& gid, const History& h) const;
};

struct GeneralizedInfoSet {
  ViewTarget anchor;
  // All (game id, history) pairs mapped to the anchor, sorted.
  std::vector<std::pair<std::string, History>> members;
};

// Subsequence of h made of moves belonging to the underlying game.
History project(const History& h, const ExtensiveGame& underlying);

ValidationReport validate_awareness(const GameWithAwareness& gwa);

// Histories of game gid that can actually be played when every mover picks
// from the move set of its anchor information set. Prefix-closed.
std::set<History> feasible_histories(const GameWithAwareness& gwa, const std::string& gid);

// Partition of all player-owned (game, history) pairs by their anchor.
std::vector<GeneralizedInfoSet> generalized_info_sets(const GameWithAwareness& gwa);

// One-game structure: full awareness, every anchor pointing at itself.
GameWithAwareness canonical(const ExtensiveGame& g);

// Game ids that `player` treats as possibly real somewhere in the family.
std::vector<std::string> player_views(const GameWithAwareness& gwa, const std::string& player);

}  // namespace gwa
