#include "gwa/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace gwa {

namespace {

Rat dist_at(const std::map<std::string, Rat>& d, const std::string& m) {
  auto it = d.find(m);
  return it == d.end() ? Rat(0) : it->second;
}

// Shape checks shared by every checker. Throws on malformed inputs so that
// verdicts are reserved for genuine equilibrium failures.
void validate_possibility_shape(const ExtensiveGame& g, const PossibilitySystem& K) {
  for (const auto& k : g.all_infosets()) {
    auto it = K.possible.find(k);
    if (it == K.possible.end() || it->second.empty())
      throw std::invalid_argument("empty or missing possible set at " + to_string(k));
    const auto& members = g.infoset(k);
    for (const auto& h : it->second)
      if (std::find(members.begin(), members.end(), h) == members.end())
        throw std::invalid_argument("possible set at " + to_string(k) +
                                    " leaves the information set");
  }
}

void validate_profile_shape(const ExtensiveGame& g, const BehavioralProfile& sigma) {
  for (const auto& k : g.all_infosets()) {
    auto it = sigma.dist.find(k);
    if (it == sigma.dist.end())
      throw std::invalid_argument("no strategy at " + to_string(k));
    const auto& moves = g.infoset_moves(k);
    Rat total(0);
    for (const auto& [m, p] : it->second) {
      if (p < 0) throw std::invalid_argument("negative probability at " + to_string(k));
      if (std::find(moves.begin(), moves.end(), m) == moves.end())
        throw std::invalid_argument("strategy at " + to_string(k) +
                                    " weights unavailable move '" + m + "'");
      total += p;
    }
    if (total != 1)
      throw std::invalid_argument("strategy at " + to_string(k) + " sums to " +
                                  rat_to_string(total));
  }
}

void validate_assessment_shape(const ExtensiveGame& g, const PossibilitySystem& K,
                               const KAssessment& a) {
  validate_possibility_shape(g, K);
  validate_profile_shape(g, a.profile);
  for (const auto& k : g.all_infosets()) {
    const auto& possible = K.at(k);
    auto it = a.beliefs.beliefs.find(k);
    if (it == a.beliefs.beliefs.end())
      throw std::invalid_argument("no beliefs at " + to_string(k));
    Rat total(0);
    for (const auto& [h, w] : it->second) {
      if (w < 0) throw std::invalid_argument("negative belief at " + to_string(k));
      if (w > 0 &&
          std::find(possible.begin(), possible.end(), h) == possible.end())
        throw std::invalid_argument("belief support at " + to_string(k) +
                                    " leaves the possible set");
      total += w;
    }
    if (total != 1)
      throw std::invalid_argument("beliefs at " + to_string(k) + " sum to " +
                                  rat_to_string(total));
  }
}

Rat profile_distance(const ExtensiveGame& g, const BehavioralProfile& a,
                     const BehavioralProfile& b) {
  Rat d(0);
  for (const auto& k : g.all_infosets())
    for (const auto& m : g.infoset_moves(k)) {
      Rat diff = a.prob(k, m) - b.prob(k, m);
      if (diff < 0) diff = -diff;
      if (diff > d) d = diff;
    }
  return d;
}

Rat belief_distance(const ExtensiveGame& g, const PossibilitySystem& K,
                    const BeliefSystem& a, const BeliefSystem& b) {
  Rat d(0);
  for (const auto& k : g.all_infosets())
    for (const auto& h : K.at(k)) {
      Rat diff = a.at(k, h) - b.at(k, h);
      if (diff < 0) diff = -diff;
      if (diff > d) d = diff;
    }
  return d;
}

bool beliefs_equal(const ExtensiveGame& g, const PossibilitySystem& K,
                   const BeliefSystem& a, const BeliefSystem& b) {
  for (const auto& k : g.all_infosets())
    for (const auto& h : K.at(k))
      if (a.at(k, h) != b.at(k, h)) return false;
  return true;
}

// Dense polynomials in the tremble parameter.
using Poly = std::vector<Rat>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Reach probability of h as a polynomial in eps under the tremble family.
Poly reach_poly(const ExtensiveGame& g, const BehavioralProfile& sigma,
                const History& h) {
  Poly out{Rat(1)};
  History prefix;
  for (const auto& move : h) {
    auto ct = g.chance.find(prefix);
    if (ct != g.chance.end()) {
      out = poly_mul(out, Poly{ct->second.at(move)});
    } else {
      InfosetKey k = *g.infoset_of(prefix);
      const auto& moves = g.infoset_moves(k);
      int unsupported = 0;
      for (const auto& m : moves)
        if (sigma.prob(k, m) == 0) ++unsupported;
      Rat p = sigma.prob(k, move);
      out = poly_mul(out, p == 0 ? Poly{Rat(0), Rat(1)}
                                 : Poly{p, -p * Rat(unsupported)});
    }
    prefix.push_back(move);
  }
  return out;
}

std::size_t leading_degree(const Poly& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != 0) return i;
  return p.size();  // identically zero
}

}  // namespace

bool check_possibility_system(const ExtensiveGame& g, const PossibilitySystem& K) {
  validate_possibility_shape(g, K);
  for (const auto& k : g.all_infosets()) {
    const auto& members = g.infoset(k);
    const auto& possible = K.at(k);
    std::vector<History> excluded;
    for (const auto& h : members)
      if (std::find(possible.begin(), possible.end(), h) == possible.end())
        excluded.push_back(h);
    if (excluded.empty()) continue;
    int pi = g.player_index(k.player);
    std::optional<Rat> value;
    for (const auto& z : g.runs()) {
      bool through = false;
      for (const auto& h : excluded)
        if (is_prefix(h, z)) through = true;
      if (!through) continue;
      const Rat& u = g.payoffs.at(z)[static_cast<std::size_t>(pi)];
      if (!value)
        value = u;
      else if (*value != u)
        return false;
    }
  }
  return true;
}

RationalityResult check_sequential_rationality(const ExtensiveGame& g,
                                               const PossibilitySystem& K,
                                               const KAssessment& a, const Rat& tol) {
  RationalityResult out;
  out.ok = true;
  for (const auto& k : g.all_infosets()) {
    const auto& restrict = K.at(k);
    Rat eu = expected_utility_at(g, a.profile, a.beliefs, k.player, k, &restrict);
    Rat best = best_response_value(g, a.profile, a.beliefs, k.player, k, &restrict);
    Rat slack = best - eu;
    if (slack > tol) out.ok = false;
    out.slack[k] = slack;
  }
  return out;
}

BeliefSystem beliefs_from_profile(const ExtensiveGame& g, const PossibilitySystem& K,
                                  const BehavioralProfile& sigma) {
  if (!sigma.completely_mixed(g))
    throw std::invalid_argument("profile is not completely mixed");
  BeliefSystem out;
  for (const auto& k : g.all_infosets()) {
    const auto& possible = K.at(k);
    Rat denom(0);
    std::map<History, Rat> reach;
    for (const auto& h : possible) {
      reach[h] = reach_prob(g, sigma, h);
      denom += reach[h];
    }
    for (const auto& h : possible) out.beliefs[k][h] = reach[h] / denom;
  }
  return out;
}

BehavioralProfile tremble(const ExtensiveGame& g, const BehavioralProfile& sigma,
                          const Rat& eps) {
  BehavioralProfile out;
  for (const auto& k : g.all_infosets()) {
    const auto& moves = g.infoset_moves(k);
    int unsupported = 0;
    for (const auto& m : moves)
      if (sigma.prob(k, m) == 0) ++unsupported;
    for (const auto& m : moves) {
      Rat p = sigma.prob(k, m);
      out.dist[k][m] = p == 0 ? eps : p * (1 - Rat(unsupported) * eps);
    }
  }
  return out;
}

BeliefSystem limit_beliefs(const ExtensiveGame& g, const PossibilitySystem& K,
                           const BehavioralProfile& sigma) {
  BeliefSystem out;
  for (const auto& k : g.all_infosets()) {
    const auto& possible = K.at(k);
    std::map<History, Poly> polys;
    std::size_t lead = SIZE_MAX;
    for (const auto& h : possible) {
      polys[h] = reach_poly(g, sigma, h);
      lead = std::min(lead, leading_degree(polys[h]));
    }
    Rat denom(0);
    for (const auto& h : possible)
      if (lead < polys[h].size()) denom += polys[h][lead];
    for (const auto& h : possible)
      out.beliefs[k][h] =
          (lead < polys[h].size() ? polys[h][lead] : Rat(0)) / denom;
  }
  return out;
}

ConsistencyReport check_consistency(const ExtensiveGame& g, const PossibilitySystem& K,
                                    const KAssessment& a,
                                    const ConsistencyCertificate& cert) {
  validate_assessment_shape(g, K, a);
  ConsistencyReport out;

  // First consistency clause: a completely mixed profile must carry exactly
  // its own conditional beliefs.
  if (a.profile.completely_mixed(g)) {
    out.ok = beliefs_equal(g, K, a.beliefs, beliefs_from_profile(g, K, a.profile));
    if (!out.ok) out.reason = "beliefs differ from the profile's conditionals";
    return out;
  }

  if (cert.steps.empty()) throw std::invalid_argument("certificate has no steps");
  if (cert.epsilons.size() != cert.steps.size())
    throw std::invalid_argument("tremble schedule length mismatch");
  for (std::size_t i = 0; i + 1 < cert.epsilons.size(); ++i)
    if (cert.epsilons[i] <= cert.epsilons[i + 1])
      throw std::invalid_argument("tremble schedule is not strictly decreasing");

  out.ok = true;
  for (const auto& step : cert.steps) {
    validate_profile_shape(g, step.profile);
    if (!step.profile.completely_mixed(g))
      throw std::invalid_argument("certificate step is not completely mixed");
    BeliefSystem derived = beliefs_from_profile(g, K, step.profile);
    if (step.beliefs && !beliefs_equal(g, K, *step.beliefs, derived)) {
      out.ok = false;
      out.reason = "declared step beliefs differ from the derived conditionals";
    }
    out.sigma_distance.push_back(profile_distance(g, step.profile, a.profile));
    out.mu_distance.push_back(belief_distance(g, K, derived, a.beliefs));
  }

  std::size_t K_steps = cert.steps.size();
  if (out.sigma_distance.back() > cert.tol_limit ||
      out.mu_distance.back() > cert.tol_limit) {
    out.ok = false;
    if (out.reason.empty()) out.reason = "final step too far from the assessment";
  }
  std::size_t window = std::min<std::size_t>(3, K_steps - 1);
  for (std::size_t i = K_steps - 1 - window; i + 1 <= K_steps - 1; ++i) {
    if (out.sigma_distance[i + 1] > out.sigma_distance[i] ||
        out.mu_distance[i + 1] > out.mu_distance[i]) {
      out.ok = false;
      if (out.reason.empty()) out.reason = "distances increase near the end";
    }
  }
  return out;
}

bool check_conditional_seq_eq(const ExtensiveGame& g, const PossibilitySystem& K,
                              const KAssessment& a, const ConsistencyCertificate& cert) {
  validate_assessment_shape(g, K, a);
  if (!check_possibility_system(g, K))
    throw std::invalid_argument("possibility system violates payoff equality");
  if (!check_sequential_rationality(g, K, a).ok) return false;
  return check_consistency(g, K, a, cert).ok;
}

BeliefSystem extend_beliefs(const ExtensiveGame& g, const PossibilitySystem& K,
                            const KAssessment& a, const ConsistencyCertificate& cert) {
  if (!check_conditional_seq_eq(g, K, a, cert))
    throw std::invalid_argument("assessment is not a conditional equilibrium");
  const BehavioralProfile& last =
      cert.steps.empty() ? a.profile : cert.steps.back().profile;
  return beliefs_from_profile(g, PossibilitySystem::full(g), last);
}

// ---- Generalized checking -------------------------------------------------

namespace {

// A single view turned into a standard game over temporary players: each
// mover is renamed (player, believed game) and nodes sharing an anchor form
// one information set. Built on the feasible subtree only.
struct LocalView {
  ExtensiveGame g;
  std::map<ViewTarget, InfosetKey> cell_of;
};

LocalView localize(const GameWithAwareness& gwa, const std::string& gid) {
  const ExtensiveGame& src = gwa.game(gid).base;
  std::set<History> feasible = feasible_histories(gwa, gid);

  LocalView out;
  std::map<History, ViewTarget> anchor_at;
  std::set<std::string> names;
  for (const auto& h : feasible) {
    if (src.is_terminal(h)) continue;
    bool has_children = false;
    for (const auto& m : src.moves_at(h)) {
      History child = h;
      child.push_back(m);
      if (feasible.count(child)) has_children = true;
    }
    if (!has_children)
      throw std::logic_error("feasible history " + history_to_string(h) + " of '" +
                             gid + "' has no feasible continuation");
    const std::string& mover = src.owner.at(h);
    if (mover == kChance) continue;
    ViewTarget t = gwa.target(gid, h);
    anchor_at[h] = t;
    names.insert(NuGame::player_name(mover, t.game));
  }

  out.g.players.assign(names.begin(), names.end());
  out.g.histories = feasible;
  std::map<ViewTarget, std::vector<History>> cells;
  for (const auto& h : feasible) {
    if (src.is_terminal(h)) {
      std::vector<Rat> u;
      for (const auto& name : out.g.players) {
        auto at = name.find('@');
        u.push_back(src.payoffs.at(h)[static_cast<std::size_t>(
            src.player_index(name.substr(0, at)))]);
      }
      out.g.payoffs[h] = std::move(u);
      continue;
    }
    const std::string& mover = src.owner.at(h);
    if (mover == kChance) {
      out.g.owner[h] = kChance;
      out.g.chance[h] = src.chance.at(h);
    } else {
      ViewTarget t = anchor_at.at(h);
      out.g.owner[h] = NuGame::player_name(mover, t.game);
      cells[t].push_back(h);
    }
  }
  for (auto& [t, members] : cells) {
    std::sort(members.begin(), members.end());
    out.g.infosets[NuGame::player_name(t.infoset.player, t.game)].push_back(members);
  }
  out.g.reindex();
  auto rep = validate_game(out.g);
  if (!rep.ok())
    throw std::logic_error("localized view '" + gid + "' is malformed:\n" +
                           rep.summary());
  for (const auto& [t, members] : cells) out.cell_of[t] = *out.g.infoset_of(members.front());
  return out;
}

BehavioralProfile localize_profile(const LocalView& lv,
                                   const GeneralizedStrategyProfile& gp) {
  BehavioralProfile out;
  for (const auto& [t, key] : lv.cell_of) {
    auto it = gp.dist.find(t);
    if (it == gp.dist.end())
      throw std::invalid_argument("no local strategy at anchor " + to_string(t));
    out.dist[key] = it->second;
  }
  return out;
}

}  // namespace

bool check_generalized_seq_eq(const GameWithAwareness& gwa,
                              const GeneralizedAssessment& a,
                              const GeneralizedCertificate& cert,
                              const std::map<std::string, Rat>& nu) {
  // Path one: the glued game under its possibility system.
  auto prior = nu.empty() ? uniform_nu(gwa) : nu;
  NuGame nug = build_nu(gwa, prior);
  KAssessment glued{lift_strategy(a.profile, nug), lift_beliefs(a.beliefs, nug)};
  ConsistencyCertificate glued_cert;
  glued_cert.epsilons = cert.epsilons;
  glued_cert.tol_limit = cert.tol_limit;
  for (const auto& step : cert.steps)
    glued_cert.steps.push_back({lift_strategy(step.profile, nug), std::nullopt});
  bool via_glued = check_conditional_seq_eq(nug.game, nug.possibility, glued, glued_cert);

  // Path two: per-view localized games, no glue involved.
  std::map<std::string, LocalView> views;
  for (const auto& [gid, ag] : gwa.games) views.emplace(gid, localize(gwa, gid));
  auto gsets = generalized_info_sets(gwa);

  bool direct = true;
  // Rationality per anchor, inside the anchor's own view.
  for (const auto& gs : gsets) {
    const LocalView& lv = views.at(gs.anchor.game);
    auto ct = lv.cell_of.find(gs.anchor);
    if (ct == lv.cell_of.end())
      throw std::logic_error("anchor " + to_string(gs.anchor) +
                             " does not reach its own view");
    BehavioralProfile sigma = localize_profile(lv, a.profile);
    const auto& anchor_members =
        gwa.game(gs.anchor.game).base.infoset(gs.anchor.infoset);
    std::vector<History> restrict;
    for (const auto& h : anchor_members)
      if (lv.g.contains(h)) restrict.push_back(h);
    BeliefSystem mu;
    auto bt = a.beliefs.beliefs.find(gs.anchor);
    if (bt == a.beliefs.beliefs.end())
      throw std::invalid_argument("no beliefs at anchor " + to_string(gs.anchor));
    mu.beliefs[ct->second] = bt->second;
    std::string name =
        NuGame::player_name(gs.anchor.infoset.player, gs.anchor.game);
    Rat eu = expected_utility_at(lv.g, sigma, mu, name, ct->second, &restrict);
    Rat best = best_response_value(lv.g, sigma, mu, name, ct->second, &restrict);
    if (best > eu) direct = false;
  }

  // Consistency per anchor via the certificate, view by view.
  bool fully_mixed = true;
  for (const auto& gs : gsets) {
    const LocalView& lv = views.at(gs.anchor.game);
    BehavioralProfile sigma = localize_profile(lv, a.profile);
    if (!sigma.completely_mixed(lv.g)) fully_mixed = false;
  }
  auto anchor_conditionals = [&](const GeneralizedStrategyProfile& gp) {
    std::map<ViewTarget, std::map<History, Rat>> out;
    for (const auto& gs : gsets) {
      const LocalView& lv = views.at(gs.anchor.game);
      BehavioralProfile sigma = localize_profile(lv, gp);
      const auto& anchor_members =
          gwa.game(gs.anchor.game).base.infoset(gs.anchor.infoset);
      Rat denom(0);
      std::map<History, Rat> reach;
      for (const auto& h : anchor_members) {
        if (!lv.g.contains(h)) continue;
        reach[h] = reach_prob(lv.g, sigma, h);
        denom += reach[h];
      }
      for (auto& [h, r] : reach) out[gs.anchor][h] = r / denom;
    }
    return out;
  };
  bool consistent;
  if (fully_mixed) {
    consistent = true;
    for (const auto& [anchor, derived] : anchor_conditionals(a.profile))
      for (const auto& [h, w] : derived) {
        auto bt = a.beliefs.beliefs.find(anchor);
        Rat declared(0);
        if (bt != a.beliefs.beliefs.end()) {
          auto ht = bt->second.find(h);
          if (ht != bt->second.end()) declared = ht->second;
        }
        if (declared != w) consistent = false;
      }
  } else {
    if (cert.steps.empty()) throw std::invalid_argument("certificate has no steps");
    if (cert.epsilons.size() != cert.steps.size())
      throw std::invalid_argument("tremble schedule length mismatch");
    for (std::size_t i = 0; i + 1 < cert.epsilons.size(); ++i)
      if (cert.epsilons[i] <= cert.epsilons[i + 1])
        throw std::invalid_argument("tremble schedule is not strictly decreasing");
    std::vector<Rat> ds, dm;
    for (const auto& step : cert.steps) {
      for (const auto& [gid, lv] : views) {
        BehavioralProfile sigma = localize_profile(lv, step.profile);
        validate_profile_shape(lv.g, sigma);
        if (!sigma.completely_mixed(lv.g))
          throw std::invalid_argument("certificate step is not completely mixed");
      }
      Rat d_sigma(0);
      for (const auto& [anchor, d] : a.profile.dist)
        for (const auto& [m, p] : d) {
          Rat diff = step.profile.prob(anchor, m) - p;
          if (diff < 0) diff = -diff;
          if (diff > d_sigma) d_sigma = diff;
        }
      Rat d_mu(0);
      for (const auto& [anchor, derived] : anchor_conditionals(step.profile))
        for (const auto& [h, w] : derived) {
          auto bt = a.beliefs.beliefs.find(anchor);
          Rat declared(0);
          if (bt != a.beliefs.beliefs.end()) {
            auto ht = bt->second.find(h);
            if (ht != bt->second.end()) declared = ht->second;
          }
          Rat diff = w - declared;
          if (diff < 0) diff = -diff;
          if (diff > d_mu) d_mu = diff;
        }
      ds.push_back(d_sigma);
      dm.push_back(d_mu);
    }
    consistent = ds.back() <= cert.tol_limit && dm.back() <= cert.tol_limit;
    std::size_t n = ds.size();
    std::size_t window = std::min<std::size_t>(3, n - 1);
    for (std::size_t i = n - 1 - window; i + 1 <= n - 1; ++i)
      if (ds[i + 1] > ds[i] || dm[i + 1] > dm[i]) consistent = false;
  }
  bool direct_verdict = direct && consistent;

  if (direct_verdict != via_glued)
    throw std::logic_error("direct and glued generalized checks disagree");
  return direct_verdict;
}

// ---- Perfect equilibrium ---------------------------------------------------

namespace {

Rat nf_expected_utility(const NormalFormGame& nf, const MixedProfile& mixed,
                        int player) {
  std::size_t n = nf.players.size();
  std::vector<int> profile(n, 0);
  Rat total(0);
  std::size_t count = nf.profile_count();
  for (std::size_t flat = 0; flat < count; ++flat) {
    Rat w(1);
    for (std::size_t p = 0; p < n; ++p)
      w *= dist_at(mixed[p], nf.strategies[p][static_cast<std::size_t>(profile[p])]);
    if (w != 0) total += w * nf.payoff(profile, player);
    for (std::size_t p = n; p-- > 0;) {
      if (++profile[p] < static_cast<int>(nf.strategies[p].size())) break;
      profile[p] = 0;
    }
  }
  return total;
}

}  // namespace

bool check_perfect_equilibrium(const NormalFormGame& nf, const MixedProfile& sigma,
                               const PerfectEqCertificate& cert) {
  std::size_t n = nf.players.size();
  auto validate_mixed = [&](const MixedProfile& m, bool fully) {
    if (m.size() != n) throw std::invalid_argument("profile arity mismatch");
    for (std::size_t p = 0; p < n; ++p) {
      Rat total(0);
      for (const auto& s : nf.strategies[p]) {
        Rat w = dist_at(m[p], s);
        if (w < 0 || (fully && w == 0))
          throw std::invalid_argument(fully ? "certificate step is not fully mixed"
                                            : "negative strategy weight");
        total += w;
      }
      if (total != 1) throw std::invalid_argument("strategy weights do not sum to 1");
    }
  };
  validate_mixed(sigma, false);
  if (cert.steps.empty()) throw std::invalid_argument("certificate has no steps");
  if (cert.epsilons.size() != cert.steps.size())
    throw std::invalid_argument("tremble schedule length mismatch");
  for (std::size_t i = 0; i + 1 < cert.epsilons.size(); ++i)
    if (cert.epsilons[i] <= cert.epsilons[i + 1])
      throw std::invalid_argument("tremble schedule is not strictly decreasing");
  for (const auto& step : cert.steps) validate_mixed(step, true);

  // sigma_i must be exactly optimal against every trembled opponent profile.
  for (const auto& step : cert.steps) {
    for (std::size_t p = 0; p < n; ++p) {
      MixedProfile vs = step;
      vs[p] = sigma[p];
      Rat value = nf_expected_utility(nf, vs, static_cast<int>(p));
      for (const auto& s : nf.strategies[p]) {
        vs[p] = {{s, Rat(1)}};
        if (nf_expected_utility(nf, vs, static_cast<int>(p)) > value) return false;
        vs[p] = sigma[p];
      }
    }
  }

  std::vector<Rat> dist;
  for (const auto& step : cert.steps) {
    Rat d(0);
    for (std::size_t p = 0; p < n; ++p)
      for (const auto& s : nf.strategies[p]) {
        Rat diff = dist_at(step[p], s) - dist_at(sigma[p], s);
        if (diff < 0) diff = -diff;
        if (diff > d) d = diff;
      }
    dist.push_back(d);
  }
  if (dist.back() > cert.tol_limit) return false;
  std::size_t K = dist.size();
  std::size_t window = std::min<std::size_t>(3, K - 1);
  for (std::size_t i = K - 1 - window; i + 1 <= K - 1; ++i)
    if (dist[i + 1] > dist[i]) return false;
  return true;
}

// ---- Solver ----------------------------------------------------------------

namespace {

// Best rational approximation of x with denominator at most `max_den`
// (continued fractions).
Rat snap_rational(double x, long max_den) {
  bool neg = x < 0;
  if (neg) x = -x;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(v);
    long a = static_cast<long>(fl);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = v - fl;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  Rat out(p1, q1);
  return neg ? -out : out;
}

std::vector<Rat> default_schedule() {
  std::vector<Rat> out;
  Rat e(1, 10);
  for (int k = 0; k < 8; ++k) {
    out.push_back(e);
    e /= 10;
  }
  return out;
}

}  // namespace

std::pair<KAssessment, ConsistencyCertificate> solve_conditional_seq_eq(
    const ExtensiveGame& g, const PossibilitySystem& K, const SolveConfig& cfg) {
  validate_possibility_shape(g, K);
  std::vector<Rat> schedule = cfg.epsilons.empty() ? default_schedule() : cfg.epsilons;

  AgentNormalForm anf = to_agent_normal_form(g);
  std::size_t n = anf.agents.size();
  std::size_t count = anf.game.profile_count();
  std::vector<std::vector<double>> table(count, std::vector<double>(n));
  for (std::size_t flat = 0; flat < count; ++flat)
    for (std::size_t a = 0; a < n; ++a)
      table[flat][a] = to_double(anf.game.payoffs[flat][a]);

  // Largest number of unsupported moves any set can have; keeps the tremble
  // schedule inside the simplex.
  int max_unsupported = 0;
  for (std::size_t a = 0; a < n; ++a)
    max_unsupported =
        std::max(max_unsupported, static_cast<int>(anf.game.strategies[a].size()));
  std::vector<Rat> usable;
  for (const auto& e : schedule)
    if (Rat(max_unsupported) * e < Rat(1, 2)) usable.push_back(e);
  if (usable.size() < 3) throw SolveFailure("tremble schedule too coarse");

  std::string last_error = "no restart converged";
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::vector<std::vector<double>> x(n);
    SplitMix64 rng(cfg.seed * 1000003ULL + static_cast<std::uint64_t>(restart));
    for (std::size_t a = 0; a < n; ++a) {
      std::size_t moves = anf.game.strategies[a].size();
      x[a].assign(moves, 1.0 / static_cast<double>(moves));
      if (restart > 0) {
        double total = 0;
        for (auto& v : x[a]) {
          v = 1.0 + static_cast<double>(rng.below(1000));
          total += v;
        }
        for (auto& v : x[a]) v /= total;
      }
    }

    for (const auto& eps_rat : usable) {
      double eps = to_double(eps_rat);
      for (std::size_t a = 0; a < n; ++a) {
        double total = 0;
        for (auto& v : x[a]) {
          v = std::max(v, eps);
          total += v;
        }
        for (auto& v : x[a]) v /= total;
      }
      for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        // Per-agent move values under the current mixture.
        std::vector<std::vector<double>> val(n);
        for (std::size_t a = 0; a < n; ++a) val[a].assign(x[a].size(), 0.0);
        std::vector<int> profile(n, 0);
        for (std::size_t flat = 0; flat < count; ++flat) {
          double w = 1.0;
          for (std::size_t a = 0; a < n; ++a)
            w *= x[a][static_cast<std::size_t>(profile[a])];
          for (std::size_t a = 0; a < n; ++a) {
            double own = x[a][static_cast<std::size_t>(profile[a])];
            val[a][static_cast<std::size_t>(profile[a])] +=
                w / own * table[flat][a];
          }
          for (std::size_t a = n; a-- > 0;) {
            if (++profile[a] < static_cast<int>(anf.game.strategies[a].size())) break;
            profile[a] = 0;
          }
        }
        double shift = 0;
        for (std::size_t a = 0; a < n; ++a) {
          std::size_t best = 0;
          for (std::size_t m = 1; m < val[a].size(); ++m)
            if (val[a][m] > val[a][best] + 1e-12) best = m;
          for (std::size_t m = 0; m < x[a].size(); ++m) {
            double target =
                m == best
                    ? 1.0 - eps * static_cast<double>(x[a].size() - 1)
                    : eps;
            double next = x[a][m] + cfg.damping * (target - x[a][m]);
            shift = std::max(shift, std::abs(next - x[a][m]));
            x[a][m] = next;
          }
        }
        if (shift < 1e-13) break;
      }
    }

    // Threshold and snap to exact rationals.
    BehavioralProfile sigma;
    for (std::size_t a = 0; a < n; ++a) {
      std::map<std::string, Rat> d;
      Rat total(0);
      for (std::size_t m = 0; m < x[a].size(); ++m) {
        if (x[a][m] < 1e-6) continue;
        Rat w = snap_rational(x[a][m], 1000);
        if (w <= 0) continue;
        d[anf.game.strategies[a][m]] = w;
        total += w;
      }
      if (d.empty()) {
        total = Rat(1);
        d[anf.game.strategies[a][0]] = Rat(1);
      }
      for (auto& [m, w] : d) w /= total;
      sigma.dist[anf.agents[a]] = std::move(d);
    }

    try {
      KAssessment out{sigma, limit_beliefs(g, K, sigma)};
      ConsistencyCertificate cert;
      cert.tol_limit = cfg.tol_limit;
      cert.epsilons = usable;
      for (const auto& e : usable) cert.steps.push_back({tremble(g, sigma, e), std::nullopt});
      if (sigma.completely_mixed(g)) {
        out.beliefs = beliefs_from_profile(g, K, sigma);
        cert.steps.clear();
        cert.epsilons.clear();
      }
      if (check_conditional_seq_eq(g, K, out, cert)) return {out, cert};
      last_error = "candidate failed verification";
    } catch (const std::invalid_argument& e) {
      last_error = e.what();
    }
  }
  throw SolveFailure("no conditional sequential equilibrium found: " + last_error);
}

std::pair<GeneralizedAssessment, GeneralizedCertificate> solve_generalized_seq_eq(
    const GameWithAwareness& gwa, const SolveConfig& cfg,
    const std::map<std::string, Rat>& nu) {
  auto prior = nu.empty() ? uniform_nu(gwa) : nu;
  NuGame nug = build_nu(gwa, prior);
  auto [ka, cert] = solve_conditional_seq_eq(nug.game, nug.possibility, cfg);
  GeneralizedAssessment out{lower_strategy(nug, ka.profile), lower_beliefs(nug, ka.beliefs)};
  GeneralizedCertificate gcert;
  gcert.epsilons = cert.epsilons;
  gcert.tol_limit = cert.tol_limit;
  for (const auto& step : cert.steps)
    gcert.steps.push_back({lower_strategy(nug, step.profile)});
  if (!gcert.steps.empty() && !check_generalized_seq_eq(gwa, out, gcert, prior))
    throw SolveFailure("lowered assessment failed the generalized check");
  return {out, gcert};
}

}  // namespace gwa
