#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "gwa/awareness.hpp"
#include "gwa/extform.hpp"
#include "gwa/nuglue.hpp"
#include "gwa/solutions.hpp"
#include "gwa/types.hpp"

namespace gwa {

// All files are JSON with insertion-ordered objects, every rational printed
// as a "p/q" string and every history as an array of move labels, so that
// emission is deterministic and emit-parse-emit is byte-stable.
using Json = nlohmann::ordered_json;

inline const std::string kGameFormat = "gwa-game/1";
inline const std::string kAssessmentFormat = "gwa-assessment/1";
inline const std::string kReportFormat = "gwa-report/1";

// ---- Building blocks ------------------------------------------------------

Json rat_json(const Rat& r);
Rat rat_from_json(const Json& j);
Json history_json(const History& h);
History history_from_json(const Json& j);

// ---- Games ----------------------------------------------------------------

// Tree as nested nodes: interior nodes carry "owner", optionally "chance",
// and a "moves" object in label order; leaves carry "payoffs".
Json game_to_json(const ExtensiveGame& g);
ExtensiveGame game_from_json(const Json& j);

Json family_to_json(const GameWithAwareness& w);
GameWithAwareness family_from_json(const Json& j);

// The glued game plus its sidecar: prior, possibility system and anchors.
Json glued_to_json(const NuGame& n);
NuGame glued_from_json(const Json& j);

// Versioned top-level documents with a "type" discriminator
// ("extensive" | "awareness" | "glued").
Json game_file(const ExtensiveGame& g);
Json family_file(const GameWithAwareness& w);
Json glued_file(const NuGame& n);

struct LoadedGame {
  std::optional<ExtensiveGame> extensive;
  std::optional<GameWithAwareness> family;
  std::optional<NuGame> glued;
};

// Dispatches on the "type" field. Throws std::invalid_argument on an
// unknown format, type or malformed body.
LoadedGame load_game_file(const Json& j);

// ---- Profiles, beliefs and certificates ------------------------------------

Json profile_to_json(const BehavioralProfile& p);
BehavioralProfile profile_from_json(const Json& j);
Json beliefs_to_json(const BeliefSystem& b);
BeliefSystem beliefs_from_json(const Json& j);
Json possibility_to_json(const PossibilitySystem& k);
PossibilitySystem possibility_from_json(const Json& j);
Json certificate_to_json(const ConsistencyCertificate& c);
ConsistencyCertificate certificate_from_json(const Json& j);

Json generalized_profile_to_json(const GeneralizedStrategyProfile& p);
GeneralizedStrategyProfile generalized_profile_from_json(const Json& j);
Json generalized_beliefs_to_json(const GeneralizedBeliefSystem& b);
GeneralizedBeliefSystem generalized_beliefs_from_json(const Json& j);
Json generalized_certificate_to_json(const GeneralizedCertificate& c);
GeneralizedCertificate generalized_certificate_from_json(const Json& j);

// One document carrying an assessment and whatever optional companions the
// producing command had: a possibility system, a certificate, or the
// generalized counterparts.
struct AssessmentFile {
  std::optional<KAssessment> assessment;
  std::optional<PossibilitySystem> possibility;
  std::optional<ConsistencyCertificate> certificate;
  std::optional<GeneralizedAssessment> generalized;
  std::optional<GeneralizedCertificate> generalized_certificate;
};

Json assessment_file(const KAssessment& a,
                     const PossibilitySystem* k = nullptr,
                     const ConsistencyCertificate* cert = nullptr);
Json generalized_assessment_file(const GeneralizedAssessment& a,
                                 const GeneralizedCertificate* cert = nullptr);
AssessmentFile load_assessment_file(const Json& j);

// ---- Plumbing ---------------------------------------------------------------

// Canonical text form: two-space indentation plus a trailing newline.
std::string dump_json(const Json& j);
// Both throw std::invalid_argument on syntax errors / unreadable paths.
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace gwa
