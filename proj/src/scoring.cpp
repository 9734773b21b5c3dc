#include "coverdx/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "coverdx/covering.hpp"

namespace coverdx {

double ScoringStrategy::leak() const {
  auto it = parameters.find("leak");
  return it == parameters.end() ? 0.0 : it->second;
}

void ScoringStrategy::check() const {
  if (kind == StrategyKind::DempsterShafer || kind == StrategyKind::Fuzzy) {
    throw NotImplementedError("scoring strategy " + to_string(kind) + " is not implemented");
  }
  for (const auto& [name, value] : parameters) {
    if (name != "leak") throw ConfigError("unknown strategy parameter '" + name + "'");
    if (!(value >= 0.0 && value < 1.0)) throw ConfigError("leak must lie in [0,1)");
  }
}

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::BayesNoisyOr: return "bayes-noisy-or";
    case StrategyKind::HeuristicMatch: return "heuristic-match";
    case StrategyKind::DempsterShafer: return "dempster-shafer";
    case StrategyKind::Fuzzy: return "fuzzy";
  }
  return "bayes-noisy-or";
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "bayes-noisy-or") return StrategyKind::BayesNoisyOr;
  if (name == "heuristic-match") return StrategyKind::HeuristicMatch;
  if (name == "dempster-shafer") return StrategyKind::DempsterShafer;
  if (name == "fuzzy") return StrategyKind::Fuzzy;
  throw ConfigError("unknown scoring strategy '" + std::string(name) + "'");
}

double symptom_probability(const KnowledgeBase& kb, const FaultSet& faults,
                           std::string_view symptom, double leak) {
  kb.require_faults(faults);
  double miss = 1.0 - leak;
  for (const auto& f : kb.causes(symptom)) {
    if (faults.contains(f)) miss *= 1.0 - kb.causal_strength(f, symptom);
  }
  return 1.0 - miss;
}

double hypothesis_score(const KnowledgeBase& kb, const FaultSet& faults,
                        const ObservationState& obs, double leak) {
  kb.require_faults(faults);
  obs.validate(kb);
  double score = 1.0;
  for (const auto& f : kb.faults()) {
    score *= faults.contains(f.id) ? f.prior : 1.0 - f.prior;
  }
  for (const auto& [s, finding] : obs.entries()) {
    if (finding == Finding::Unknown) continue;
    const double p = symptom_probability(kb, faults, s, leak);
    score *= finding == Finding::Present ? p : 1.0 - p;
  }
  return score;
}

double heuristic_match_score(const KnowledgeBase& kb, const FaultSet& faults,
                             const ObservationState& obs) {
  kb.require_faults(faults);
  obs.validate(kb);
  const auto present = obs.present();
  double matched = 0.0;
  double total = 0.0;
  for (const auto& f : faults) {
    for (const auto& s : kb.effects(f)) {
      const double w = kb.causal_strength(f, s);
      total += w;
      if (present.contains(s)) matched += w;
    }
  }
  for (const auto& s : present) {
    const auto& causes = kb.causes(s);
    bool covered = std::any_of(faults.begin(), faults.end(),
                               [&](const std::string& f) { return causes.contains(f); });
    if (!covered) total += 1.0;
  }
  if (total == 0.0) return 1.0;
  return matched / total;
}

double strategy_score(const KnowledgeBase& kb, const FaultSet& faults,
                      const ObservationState& obs, const ScoringStrategy& strategy) {
  strategy.check();
  if (strategy.kind == StrategyKind::HeuristicMatch) {
    return heuristic_match_score(kb, faults, obs);
  }
  return hypothesis_score(kb, faults, obs, strategy.leak());
}

void normalize_and_sort(std::vector<ScoredHypothesis>& ranked) {
  double total = 0.0;
  for (const auto& h : ranked) total += h.raw_score;
  for (auto& h : ranked) h.posterior = total > 0.0 ? h.raw_score / total : 0.0;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const ScoredHypothesis& a, const ScoredHypothesis& b) {
                     if (a.posterior != b.posterior) return a.posterior > b.posterior;
                     return cover_order(a.faults, b.faults);
                   });
}

std::vector<ScoredHypothesis> rank_hypotheses(const KnowledgeBase& kb,
                                              const std::vector<FaultSet>& candidates,
                                              const ObservationState& obs,
                                              const ScoringStrategy& strategy) {
  if (candidates.empty()) throw ConfigError("candidate list is empty");
  strategy.check();
  const auto present = obs.present();
  std::vector<ScoredHypothesis> ranked;
  ranked.reserve(candidates.size());
  for (const auto& d : candidates) {
    ScoredHypothesis h;
    h.faults = d;
    h.raw_score = strategy_score(kb, d, obs, strategy);
    h.covers_all = is_cover(kb, d, present);
    ranked.push_back(std::move(h));
  }
  normalize_and_sort(ranked);
  return ranked;
}

double derive_evoking_strength(const KnowledgeBase& kb, std::string_view symptom,
                               std::string_view fault) {
  kb.fault(fault);
  if (const auto* link = kb.find_link(fault, symptom); link && link->evoking_strength) {
    return *link->evoking_strength;
  }
  auto value = bayes_evoking_strength(kb, symptom, fault);
  if (!value) throw NoCauseError(std::string(symptom));
  return *value;
}

}  // namespace coverdx
