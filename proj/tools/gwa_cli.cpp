// Command-line front end: validate games, glue awareness families, check and
// solve equilibria, and run the rationalizability pipeline. Reports go to
// stdout as JSON; diagnostics go to stderr. Exit codes: 0 pass, 1 a check
// failed, 2 invalid input, 3 solver failure or internal disagreement.

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gwa/awareness.hpp"
#include "gwa/demos.hpp"
#include "gwa/extform.hpp"
#include "gwa/io.hpp"
#include "gwa/nuglue.hpp"
#include "gwa/rationalizability.hpp"
#include "gwa/solutions.hpp"

namespace {

using namespace gwa;

constexpr int kPass = 0;
constexpr int kCheckFail = 1;
constexpr int kInvalidInput = 2;
constexpr int kSolverFailure = 3;

bool is_demo(const std::string& arg) { return arg.rfind("demo:", 0) == 0; }
std::string demo_name(const std::string& arg) { return arg.substr(5); }

bool in(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Any game argument: a demo name or a path to a game file.
LoadedGame load_game(const std::string& arg) {
  if (!is_demo(arg)) return load_game_file(read_json_file(arg));
  std::string name = demo_name(arg);
  LoadedGame out;
  if (in(demos::extensive_names(), name)) {
    out.extensive = demos::extensive(name);
    return out;
  }
  if (in(demos::family_names(), name)) {
    out.family = demos::family(name);
    return out;
  }
  // "<family>-nu": the uniformly glued version of a family.
  if (name.size() > 3 && name.substr(name.size() - 3) == "-nu") {
    std::string base = name.substr(0, name.size() - 3);
    if (in(demos::family_names(), base)) {
      auto w = demos::family(base);
      out.glued = build_nu(w, uniform_nu(w));
      return out;
    }
  }
  throw std::invalid_argument("unknown demo game '" + name + "'");
}

NormalFormGame load_normal(const std::string& arg) {
  if (is_demo(arg) && in(demos::normal_names(), demo_name(arg)))
    return demos::normal(demo_name(arg));
  throw std::invalid_argument("expected a demo normal-form game, got '" + arg + "'");
}

AssessmentFile load_assessment(const std::string& arg) {
  if (!is_demo(arg)) return load_assessment_file(read_json_file(arg));
  std::string name = demo_name(arg);
  AssessmentFile out;
  if (name == "defect-ea") {
    out.generalized = demos::gpd_defect_ea();
    out.generalized_certificate = demos::gpd_defect_ea_cert();
    return out;
  }
  if (name == "bad-cb") {
    out.assessment = demos::gpd_nu_bad_cb_full();
    out.certificate = demos::gpd_nu_bad_cb_cert();
    return out;
  }
  if (name == "bad-cb-restricted") {
    out.assessment = demos::gpd_nu_bad_cb_restricted();
    out.certificate = demos::gpd_nu_bad_cb_cert();
    return out;
  }
  throw std::invalid_argument("unknown demo assessment '" + name + "'");
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
  }
};

void emit(const Json& report, const std::string& out_path) {
  std::cout << dump_json(report);
  if (!out_path.empty()) write_json_file(out_path, report);
}

Json report_head(const std::string& command) {
  Json r = Json::object();
  r["format"] = kReportFormat;
  r["command"] = command;
  return r;
}

int cmd_validate(const std::string& game_arg, const std::string& out_path) {
  Timer t;
  auto g = load_game(game_arg);
  ValidationReport rep;
  std::string kind;
  if (g.extensive) {
    rep = validate_game(*g.extensive);
    kind = "extensive";
  } else if (g.family) {
    rep = validate_awareness(*g.family);
    kind = "awareness";
  } else {
    rep = validate_game(g.glued->game);
    kind = "glued";
  }
  Json r = report_head("validate");
  r["kind"] = kind;
  r["verdict"] = rep.ok();
  Json v = Json::array();
  for (const auto& viol : rep.violations)
    v.push_back(Json{{"code", viol.code}, {"message", viol.message}});
  r["violations"] = std::move(v);
  r["elapsed_ms"] = t.ms();
  emit(r, out_path);
  return rep.ok() ? kPass : kCheckFail;
}

int cmd_build_nu(const std::string& game_arg, const std::string& nu_arg,
                 const std::string& out_path) {
  Timer t;
  auto g = load_game(game_arg);
  if (!g.family)
    throw std::invalid_argument("build-nu needs an awareness family");
  std::map<std::string, Rat> nu;
  if (nu_arg == "uniform") {
    nu = uniform_nu(*g.family);
  } else {
    Json doc = read_json_file(nu_arg);
    for (auto it = doc.begin(); it != doc.end(); ++it)
      nu[it.key()] = rat_from_json(it.value());
  }
  auto glue = build_nu(*g.family, nu);
  Json r = glued_file(glue);
  r["elapsed_ms"] = t.ms();
  emit(r, out_path);
  return kPass;
}

// Which possibility system a conditional check runs against.
PossibilitySystem resolve_K(const std::string& k_arg, const LoadedGame& g,
                            const AssessmentFile& af, const ExtensiveGame& tree) {
  if (k_arg == "full") return PossibilitySystem::full(tree);
  if (k_arg == "anchors") {
    if (!g.glued)
      throw std::invalid_argument("--K anchors needs a glued game");
    return g.glued->possibility;
  }
  if (k_arg.empty()) {
    if (af.possibility) return *af.possibility;
    return PossibilitySystem::full(tree);
  }
  return possibility_from_json(read_json_file(k_arg));
}

int cmd_check(const std::string& kind, const std::string& game_arg,
              const std::string& assessment_arg, const std::string& k_arg,
              const std::string& out_path) {
  Timer t;
  auto g = load_game(game_arg);
  auto af = load_assessment(assessment_arg);
  Json r = report_head("check " + kind);
  bool ok = false;

  if (kind == "nash") {
    const ExtensiveGame& tree = g.extensive ? *g.extensive : g.glued->game;
    if (!g.extensive && !g.glued)
      throw std::invalid_argument("check nash needs an extensive or glued game");
    if (!af.assessment) throw std::invalid_argument("assessment file has no profile");
    auto res = check_nash(tree, af.assessment->profile);
    ok = res.ok;
    Json slack = Json::object();
    for (const auto& [p, s] : res.slack) slack[p] = rat_to_string(s);
    r["slack"] = std::move(slack);
  } else if (kind == "seq" || kind == "cseq") {
    const ExtensiveGame& tree = g.extensive ? *g.extensive : g.glued->game;
    if (!g.extensive && !g.glued)
      throw std::invalid_argument("check " + kind + " needs an extensive or glued game");
    if (!af.assessment || !af.certificate)
      throw std::invalid_argument("check " + kind +
                                  " needs an assessment with a certificate");
    PossibilitySystem K = kind == "seq" ? PossibilitySystem::full(tree)
                                        : resolve_K(k_arg, g, af, tree);
    ok = check_conditional_seq_eq(tree, K, *af.assessment, *af.certificate);
    auto rat = check_sequential_rationality(tree, K, *af.assessment);
    Json slack = Json::object();
    for (const auto& [k, s] : rat.slack) slack[to_string(k)] = rat_to_string(s);
    r["rationality_slack"] = std::move(slack);
  } else if (kind == "gnash") {
    if (!g.family) throw std::invalid_argument("check gnash needs an awareness family");
    if (!af.generalized)
      throw std::invalid_argument("assessment file has no generalized profile");
    auto res = check_generalized_nash(*g.family, af.generalized->profile);
    ok = res.ok;
    Json slack = Json::object();
    for (const auto& [pg, s] : res.slack)
      slack[pg.first + "@" + pg.second] = rat_to_string(s);
    r["slack"] = std::move(slack);
  } else if (kind == "gseq") {
    if (!g.family) throw std::invalid_argument("check gseq needs an awareness family");
    if (!af.generalized || !af.generalized_certificate)
      throw std::invalid_argument(
          "check gseq needs a generalized assessment with a certificate");
    ok = check_generalized_seq_eq(*g.family, *af.generalized,
                                  *af.generalized_certificate);
  } else if (kind == "perfect") {
    throw std::invalid_argument(
        "check perfect reads its inputs from a file; see check-perfect");
  } else {
    throw std::invalid_argument("unknown check kind '" + kind + "'");
  }

  r["verdict"] = ok;
  r["elapsed_ms"] = t.ms();
  emit(r, out_path);
  return ok ? kPass : kCheckFail;
}

// Perfect-equilibrium check of a normal-form demo game. The file carries the
// mixed profile and the tremble steps keyed by strategy name.
int cmd_check_perfect(const std::string& game_arg, const std::string& file,
                      const std::string& out_path) {
  Timer t;
  auto nf = load_normal(game_arg);
  Json doc = read_json_file(file);
  auto parse_mixed = [&](const Json& j) {
    MixedProfile m;
    for (const auto& entry : j) {
      std::map<std::string, Rat> d;
      for (auto it = entry.begin(); it != entry.end(); ++it)
        d[it.key()] = rat_from_json(it.value());
      m.push_back(std::move(d));
    }
    return m;
  };
  try {
    MixedProfile sigma = parse_mixed(doc.at("profile"));
    PerfectEqCertificate cert;
    for (const auto& e : doc.at("epsilons")) cert.epsilons.push_back(rat_from_json(e));
    for (const auto& s : doc.at("steps")) cert.steps.push_back(parse_mixed(s));
    bool ok = check_perfect_equilibrium(nf, sigma, cert);
    Json r = report_head("check-perfect");
    r["verdict"] = ok;
    r["elapsed_ms"] = t.ms();
    emit(r, out_path);
    return ok ? kPass : kCheckFail;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("perfect check file: ") + e.what());
  }
}

int cmd_solve(const std::string& kind, const std::string& game_arg,
              std::uint64_t seed, const std::string& out_path) {
  Timer t;
  auto g = load_game(game_arg);
  SolveConfig cfg;
  cfg.seed = seed;
  Json r = report_head("solve " + kind);

  if (kind == "cseq" || kind == "nash") {
    const ExtensiveGame& tree = g.extensive ? *g.extensive : g.glued->game;
    if (!g.extensive && !g.glued)
      throw std::invalid_argument("solve " + kind + " needs an extensive or glued game");
    PossibilitySystem K =
        g.glued ? g.glued->possibility : PossibilitySystem::full(tree);
    auto [a, cert] = solve_conditional_seq_eq(tree, K, cfg);
    if (!check_conditional_seq_eq(tree, K, a, cert))
      throw SolveFailure("solution failed its own re-check");
    if (kind == "nash" && !check_nash(tree, a.profile).ok)
      throw SolveFailure("conditional solution is not an ex-ante equilibrium");
    r["solution"] = assessment_file(a, &K, &cert);
  } else if (kind == "gseq") {
    if (!g.family) throw std::invalid_argument("solve gseq needs an awareness family");
    auto [a, cert] = solve_generalized_seq_eq(*g.family, cfg);
    if (!check_generalized_seq_eq(*g.family, a, cert))
      throw SolveFailure("solution failed its own re-check");
    r["solution"] = generalized_assessment_file(a, &cert);
  } else {
    throw std::invalid_argument("unknown solve kind '" + kind + "'");
  }
  r["verdict"] = true;
  r["elapsed_ms"] = t.ms();
  std::cout << dump_json(r);
  // The artifact is the assessment itself, so `check` can read it back.
  if (!out_path.empty()) write_json_file(out_path, r["solution"]);
  return kPass;
}

int cmd_rationalize(const std::string& game_arg, const std::string& out_path) {
  Timer t;
  auto nf = load_normal(game_arg);
  auto rs = rationalizable_sets(nf);
  Json r = report_head("rationalize");
  Json sets = Json::object();
  for (std::size_t p = 0; p < nf.players.size(); ++p) sets[nf.players[p]] = rs.sets[p];
  r["rationalizable"] = std::move(sets);
  Json trace = Json::array();
  for (const auto& round : rs.trace) {
    Json row = Json::object();
    for (std::size_t p = 0; p < nf.players.size(); ++p) row[nf.players[p]] = round[p];
    trace.push_back(std::move(row));
  }
  r["trace"] = std::move(trace);
  r["elapsed_ms"] = t.ms();
  emit(r, out_path);
  return kPass;
}

std::vector<std::string> split_profile(const std::string& arg) {
  std::vector<std::string> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

int cmd_gamma_star(const std::string& game_arg, const std::string& profile_arg,
                   const std::string& out_path) {
  Timer t;
  auto nf = load_normal(game_arg);
  auto w = build_gamma_star(nf, split_profile(profile_arg));
  if (!validate_awareness(w).ok())
    throw std::logic_error("constructed family fails validation");
  Json r = family_file(w);
  r["elapsed_ms"] = t.ms();
  emit(r, out_path);
  return kPass;
}

int cmd_verify_rationalizability(const std::string& game_arg,
                                 const std::string& profile_arg,
                                 const std::string& out_path) {
  Timer t;
  auto nf = load_normal(game_arg);
  auto res = verify_equilibrium_rationalizability(nf, split_profile(profile_arg));
  Json r = report_head("verify-rationalizability");
  r["equilibrium_of_witness_profile"] = res.part_i;
  r["all_pure_equilibria_rationalizable"] = res.part_ii;
  r["profiles_enumerated"] = res.enumerated;
  r["verdict"] = res.part_i && res.part_ii;
  r["elapsed_ms"] = t.ms();
  emit(r, out_path);
  return (res.part_i && res.part_ii) ? kPass : kCheckFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checker and solver for games with unaware players"};
  app.require_subcommand(1);

  std::string game, assessment, kind, nu = "uniform", out, k_arg, profile_arg, file;
  std::uint64_t seed = 1;

  auto* validate = app.add_subcommand("validate", "Validate a game or family");
  validate->add_option("game", game)->required();
  validate->add_option("--out", out);

  auto* buildnu = app.add_subcommand("build-nu", "Glue a family into one game");
  buildnu->add_option("game", game)->required();
  buildnu->add_option("--nu", nu, "uniform or a JSON file of view weights");
  buildnu->add_option("--out", out);

  auto* check = app.add_subcommand("check", "Check an assessment");
  check->add_option("kind", kind, "nash|seq|cseq|gnash|gseq")->required();
  check->add_option("game", game)->required();
  check->add_option("assessment", assessment)->required();
  check->add_option("--K", k_arg, "full|anchors|<file> (cseq only)");
  check->add_option("--out", out);

  auto* perfect = app.add_subcommand("check-perfect", "Check a perfect equilibrium");
  perfect->add_option("game", game)->required();
  perfect->add_option("file", file)->required();
  perfect->add_option("--out", out);

  auto* solve = app.add_subcommand("solve", "Solve for an equilibrium");
  solve->add_option("kind", kind, "cseq|gseq|nash")->required();
  solve->add_option("game", game)->required();
  solve->add_option("--seed", seed);
  solve->add_option("--out", out);

  auto* rationalize = app.add_subcommand("rationalize", "Iterated elimination");
  rationalize->add_option("game", game)->required();
  rationalize->add_option("--out", out);

  auto* gstar = app.add_subcommand("gamma-star", "Witness awareness family");
  gstar->add_option("game", game)->required();
  gstar->add_option("--profile", profile_arg)->required();
  gstar->add_option("--out", out);

  auto* verify = app.add_subcommand(
      "verify-rationalizability",
      "Equilibrium/rationalizability correspondence on the witness family");
  verify->add_option("game", game)->required();
  verify->add_option("--profile", profile_arg)->required();
  verify->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kInvalidInput;
  }

  try {
    if (validate->parsed()) return cmd_validate(game, out);
    if (buildnu->parsed()) return cmd_build_nu(game, nu, out);
    if (check->parsed()) return cmd_check(kind, game, assessment, k_arg, out);
    if (perfect->parsed()) return cmd_check_perfect(game, file, out);
    if (solve->parsed()) return cmd_solve(kind, game, seed, out);
    if (rationalize->parsed()) return cmd_rationalize(game, out);
    if (gstar->parsed()) return cmd_gamma_star(game, profile_arg, out);
    if (verify->parsed()) return cmd_verify_rationalizability(game, profile_arg, out);
  } catch (const SolveFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::logic_error& e) {
    std::cerr << "internal disagreement: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}
