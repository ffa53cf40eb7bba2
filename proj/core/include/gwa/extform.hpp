#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gwa/types.hpp"

namespace gwa {

// Finite extensive-form game: prefix-closed history set, owner map for
// nonterminal nodes (players or chance), strictly positive chance
// distributions, per-player information partitions and rational payoffs
// at the runs. Immutable after reindex(); every operation is pure.
class ExtensiveGame {
 public:
  std::vector<std::string> players;
  std::set<History> histories;                           // prefix-closed, contains {}
  std::map<History, std::string> owner;                  // nonterminal -> player or "c"
  std::map<History, std::map<std::string, Rat>> chance;  // chance node -> dist over moves
  // player -> information sets, each a sorted list of histories. reindex()
  // sorts sets by their first history so indices are deterministic.
  std::map<std::string, std::vector<std::vector<History>>> infosets;
  std::map<History, std::vector<Rat>> payoffs;           // run -> payoff per player

  // Builds the child index and infoset lookup; call once after construction.
  void reindex();

  bool contains(const History& h) const { return histories.count(h) > 0; }
  bool is_terminal(const History& h) const;
  const std::vector<std::string>& moves_at(const History& h) const;
  std::vector<History> runs() const;
  int player_index(const std::string& player) const;

  std::optional<InfosetKey> infoset_of(const History& h) const;
  const std::vector<History>& infoset(const InfosetKey& k) const;
  std::vector<InfosetKey> all_infosets() const;
  const std::string& infoset_owner(const InfosetKey& k) const { return k.player; }
  // Common move set of an information set (validated to be common).
  const std::vector<std::string>& infoset_moves(const InfosetKey& k) const;

  // Moves made by `player`, interleaved with the infosets passed through,
  // along the strict prefixes of h. Used by the perfect-recall check and
  // the best-response dynamic program.
  std::vector<std::pair<InfosetKey, std::string>> experience(
      const std::string& player, const History& h) const;

 private:
  std::map<History, std::vector<std::string>> children_;
  std::map<History, InfosetKey> infoset_key_;
};

// Behavioral strategy profile: per information set a rational distribution
// over the set's moves (missing entries are zero).
struct BehavioralProfile {
  std::map<InfosetKey, std::map<std::string, Rat>> dist;

  Rat prob(const InfosetKey& k, const std::string& move) const;
  // Probability of `move` at history h, consulting chance at chance nodes.
  Rat move_prob(const ExtensiveGame& g, const History& h, const std::string& move) const;
  bool completely_mixed(const ExtensiveGame& g) const;
};

struct BeliefSystem {
  std::map<InfosetKey, std::map<History, Rat>> beliefs;
  Rat at(const InfosetKey& k, const History& h) const;
};

// Nonempty subset K(I) of each information set: the histories the mover
// actually considers possible there.
struct PossibilitySystem {
  std::map<InfosetKey, std::vector<History>> possible;

  static PossibilitySystem full(const ExtensiveGame& g);
  const std::vector<History>& at(const InfosetKey& k) const;
  bool is_full(const ExtensiveGame& g) const;
};

struct NormalFormGame {
  std::vector<std::string> players;
  std::vector<std::vector<std::string>> strategies;  // per player, sorted
  // payoff[flat profile index][player]; index is mixed-radix over
  // per-player strategy indices, last player fastest.
  std::vector<std::vector<Rat>> payoffs;

  std::size_t profile_count() const;
  std::size_t flat_index(const std::vector<int>& profile) const;
  const Rat& payoff(const std::vector<int>& profile, int player) const;
  int strategy_index(int player, const std::string& name) const;
};

ValidationReport validate_game(const ExtensiveGame& g);

Rat reach_prob(const ExtensiveGame& g, const BehavioralProfile& sigma, const History& h);

Rat cond_reach_prob(const ExtensiveGame& g, const BehavioralProfile& sigma,
                    const History& target, const History& from);

// Expected continuation utility for `player` starting from h under sigma.
Rat continuation_value(const ExtensiveGame& g, const BehavioralProfile& sigma,
                       const History& h, int player);

// EU_i((sigma, mu) | I): beliefs weight the histories of I, play follows
// sigma below them. `restrict_to` limits the summation (conditional form);
// defaults to all of I.
Rat expected_utility_at(const ExtensiveGame& g, const BehavioralProfile& sigma,
                        const BeliefSystem& mu, const std::string& player,
                        const InfosetKey& I,
                        const std::vector<History>* restrict_to = nullptr);

// Max over all behavioral strategies of the owner of I (replanning at I and
// every own information set below it) of the belief-weighted continuation
// value. Backward induction over the owner's information sets, valid under
// perfect recall.
Rat best_response_value(const ExtensiveGame& g, const BehavioralProfile& sigma,
                        const BeliefSystem& mu, const std::string& player,
                        const InfosetKey& I,
                        const std::vector<History>* restrict_to = nullptr);

// Ex-ante value of player's best full strategy against sigma_{-player}.
Rat best_response_value_ex_ante(const ExtensiveGame& g, const BehavioralProfile& sigma,
                                const std::string& player);

Rat ex_ante_utility(const ExtensiveGame& g, const BehavioralProfile& sigma,
                    const std::string& player);

struct NashResult {
  bool ok = false;
  std::map<std::string, Rat> slack;  // per player
};

NashResult check_nash(const ExtensiveGame& g, const BehavioralProfile& sigma,
                      const Rat& tol = Rat(0));

struct AgentNormalForm {
  NormalFormGame game;
  std::vector<InfosetKey> agents;  // agent order matches game.players
};

// Multiagent representation: one temporary player per information set with
// the set's moves as strategies; payoffs are ex-ante expected utilities of
// the owner under the assembled pure behavioral profile.
AgentNormalForm to_agent_normal_form(const ExtensiveGame& g);

}  // namespace gwa
