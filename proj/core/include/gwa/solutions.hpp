#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gwa/awareness.hpp"
#include "gwa/extform.hpp"
#include "gwa/nuglue.hpp"
#include "gwa/types.hpp"

namespace gwa {

// Assessment restricted to a possibility system: beliefs live on K(I).
// The plain assessment is the special case K(I) = I.
struct KAssessment {
  BehavioralProfile profile;
  BeliefSystem beliefs;
};

// Finite stand-in for the limit clause of consistency: a sequence of
// completely mixed profiles along a strictly decreasing tremble schedule.
// Steps may carry their belief systems; if present they must match the
// beliefs derived from the step's profile.
struct ConsistencyCertificate {
  struct Step {
    BehavioralProfile profile;
    std::optional<BeliefSystem> beliefs;
  };
  std::vector<Step> steps;
  std::vector<Rat> epsilons;
  Rat tol_limit = Rat(1, 1000000);
};

// K(I) is valid when the mover cannot distinguish payoffs across the runs
// it has ruled out. Throws std::invalid_argument on empty or missing K(I).
bool check_possibility_system(const ExtensiveGame& g, const PossibilitySystem& K);

struct RationalityResult {
  bool ok = false;
  std::map<InfosetKey, Rat> slack;
};

// At every information set the mover's strategy must attain the best
// replanned value under its restricted beliefs.
RationalityResult check_sequential_rationality(const ExtensiveGame& g,
                                               const PossibilitySystem& K,
                                               const KAssessment& a,
                                               const Rat& tol = Rat(0));

// Conditioning the reach distribution of a completely mixed profile on the
// possible histories of each information set. Throws std::invalid_argument
// if sigma is not completely mixed.
BeliefSystem beliefs_from_profile(const ExtensiveGame& g, const PossibilitySystem& K,
                                  const BehavioralProfile& sigma);

// Geometric tremble toward the unsupported moves: each supported move is
// scaled by (1 - u*eps) and each unsupported move receives eps, where u is
// the number of unsupported moves at the set. Completely mixed for small eps.
BehavioralProfile tremble(const ExtensiveGame& g, const BehavioralProfile& sigma,
                          const Rat& eps);

// Exact limit of beliefs_from_profile(tremble(g, sigma, eps)) as eps -> 0,
// computed from leading coefficients of the reach polynomials in eps.
BeliefSystem limit_beliefs(const ExtensiveGame& g, const PossibilitySystem& K,
                           const BehavioralProfile& sigma);

struct ConsistencyReport {
  bool ok = false;
  std::vector<Rat> sigma_distance;  // per step, max-norm to the assessment
  std::vector<Rat> mu_distance;
  std::string reason;
};

ConsistencyReport check_consistency(const ExtensiveGame& g, const PossibilitySystem& K,
                                    const KAssessment& a,
                                    const ConsistencyCertificate& cert);

// Rationality and consistency together under K.
bool check_conditional_seq_eq(const ExtensiveGame& g, const PossibilitySystem& K,
                              const KAssessment& a, const ConsistencyCertificate& cert);

// Reconditions the certificate's last iterate over the full information
// sets. The (profile, extended beliefs) pair then passes the unrestricted
// sequential check with the same certificate.
BeliefSystem extend_beliefs(const ExtensiveGame& g, const PossibilitySystem& K,
                            const KAssessment& a, const ConsistencyCertificate& cert);

// ---- Generalized (family-level) checking -------------------------------

struct GeneralizedAssessment {
  GeneralizedStrategyProfile profile;
  GeneralizedBeliefSystem beliefs;
};

struct GeneralizedCertificate {
  struct Step {
    GeneralizedStrategyProfile profile;
  };
  std::vector<Step> steps;
  std::vector<Rat> epsilons;
  Rat tol_limit = Rat(1, 1000000);
};

// Generalized sequential equilibrium, computed two independent ways: per
// view game with local-agent information sets, and through the glued game
// with its possibility system. Throws std::logic_error if they disagree.
bool check_generalized_seq_eq(const GameWithAwareness& gwa,
                              const GeneralizedAssessment& a,
                              const GeneralizedCertificate& cert,
                              const std::map<std::string, Rat>& nu = {});

// ---- Perfect equilibrium of a normal-form game --------------------------

// One mixed strategy per player, by strategy name.
using MixedProfile = std::vector<std::map<std::string, Rat>>;

struct PerfectEqCertificate {
  std::vector<MixedProfile> steps;
  std::vector<Rat> epsilons;
  Rat tol_limit = Rat(1, 1000000);
};

// Selten-style verification: every step is fully mixed, sigma is exactly a
// best response to every step, and the steps approach sigma.
bool check_perfect_equilibrium(const NormalFormGame& nf, const MixedProfile& sigma,
                               const PerfectEqCertificate& cert);

// ---- Solver --------------------------------------------------------------

struct SolveFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveConfig {
  std::vector<Rat> epsilons;  // tremble schedule; default 10^-1 .. 10^-8
  int max_iterations = 10000;
  double damping = 0.5;
  int restarts = 16;
  Rat tol_limit = Rat(1, 1000000);
  std::uint64_t seed = 1;
};

// Damped best-response iteration on the epsilon-floored agent normal form,
// snapped to exact rationals and self-verified; throws SolveFailure when no
// restart yields an assessment passing check_conditional_seq_eq.
std::pair<KAssessment, ConsistencyCertificate> solve_conditional_seq_eq(
    const ExtensiveGame& g, const PossibilitySystem& K, const SolveConfig& cfg = {});

// Solves the glued game under its possibility system and lowers the result.
std::pair<GeneralizedAssessment, GeneralizedCertificate> solve_generalized_seq_eq(
    const GameWithAwareness& gwa, const SolveConfig& cfg = {},
    const std::map<std::string, Rat>& nu = {});

}  // namespace gwa
