#pragma once

#include <string>
#include <vector>

#include "gwa/awareness.hpp"
#include "gwa/extform.hpp"
#include "gwa/nuglue.hpp"
#include "gwa/solutions.hpp"

// Compiled-in instances, addressable from the CLI as demo:<name>.
namespace gwa::demos {

// Two-player stopping game: A quits for (1,3) or passes to B, who splits
// for (2,2) or burns for (0,0).
ExtensiveGame fig1();

// fig1 wrapped as a one-game awareness family.
GameWithAwareness canonical_fig1();

// Prisoner's dilemma with an escape move, where A may think B is unaware
// of the escape: four views (modeler, A's, and B's two types).
GameWithAwareness gpd();

// Two-stage game where player 1 falsely believes player 2 is unaware of
// the move L: three views.
GameWithAwareness fig2();

// Pruning fixture: the mover at the root is unaware of its own move m2,
// so the modeler-game branch under m2 is infeasible.
GameWithAwareness syn1();

// Normal-form fixtures.
NormalFormGame pd_nf();  // prisoner's dilemma
NormalFormGame mp();     // matching pennies
NormalFormGame nbr3();   // 3x2 game whose strategy B is never a best response

std::vector<std::string> extensive_names();
std::vector<std::string> family_names();
std::vector<std::string> normal_names();

ExtensiveGame extensive(const std::string& name);
GameWithAwareness family(const std::string& name);
NormalFormGame normal(const std::string& name);

// All-defect assessment of the gpd family: escape where available, defect
// everywhere else, with the matching limit beliefs and tremble certificate.
GeneralizedAssessment gpd_defect_ea();
GeneralizedCertificate gpd_defect_ea_cert();

// Glued-gpd assessment where B's aware type cooperates off path while
// believing the play never entered his own view. Beliefs come in two
// flavors: over the whole welded information sets (for the unrestricted
// check, which it passes) and over the anchor members only (for the
// restricted check, which it fails).
KAssessment gpd_nu_bad_cb_full();
KAssessment gpd_nu_bad_cb_restricted();
ConsistencyCertificate gpd_nu_bad_cb_cert();

}  // namespace gwa::demos
