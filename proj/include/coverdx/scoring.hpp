#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coverdx/kb.hpp"
#include "coverdx/observations.hpp"

namespace coverdx {

struct ScoredHypothesis {
  FaultSet faults;
  double raw_score = 0.0;
  double posterior = 0.0;
  bool covers_all = false;

  bool operator==(const ScoredHypothesis&) const = default;
};

enum class StrategyKind { BayesNoisyOr, HeuristicMatch, DempsterShafer, Fuzzy };

/// Measure-of-fit strategy. Recognized parameters: "leak" (bayes-noisy-or,
/// default 0), the probability that a symptom appears with no fault present.
struct ScoringStrategy {
  StrategyKind kind = StrategyKind::BayesNoisyOr;
  std::map<std::string, double> parameters;

  double leak() const;
  /// Throws NotImplementedError for reserved strategies, ConfigError for bad parameters.
  void check() const;

  bool operator==(const ScoringStrategy&) const = default;
};

std::string to_string(StrategyKind kind);
/// Throws ConfigError for unrecognized names.
StrategyKind parse_strategy(std::string_view name);

/// Noisy-OR: 1 - (1 - leak) * prod over linked f in D of (1 - c(s|f)).
double symptom_probability(const KnowledgeBase& kb, const FaultSet& faults,
                           std::string_view symptom, double leak = 0.0);

/// Unnormalized joint P(D, observations) under independent fault priors and
/// the noisy-OR likelihood. Unknown findings contribute no factor.
double hypothesis_score(const KnowledgeBase& kb, const FaultSet& faults,
                        const ObservationState& obs, double leak = 0.0);

/// Share of D's causal weight that lands on present symptoms, penalized by
/// one unit per present symptom D leaves unexplained.
double heuristic_match_score(const KnowledgeBase& kb, const FaultSet& faults,
                             const ObservationState& obs);

double strategy_score(const KnowledgeBase& kb, const FaultSet& faults,
                      const ObservationState& obs, const ScoringStrategy& strategy);

/// Scores and normalizes over the supplied candidates only. Order: posterior
/// descending, then cardinality, then lexicographic ids; stable otherwise.
std::vector<ScoredHypothesis> rank_hypotheses(const KnowledgeBase& kb,
                                              const std::vector<FaultSet>& candidates,
                                              const ObservationState& obs,
                                              const ScoringStrategy& strategy = {});

/// Re-normalizes posteriors in place and restores ranking order.
void normalize_and_sort(std::vector<ScoredHypothesis>& ranked);

/// P(f | s): stored evoking strength if present, else the single-fault Bayes
/// inversion over causes(s). Throws NoCauseError when s has no causes.
double derive_evoking_strength(const KnowledgeBase& kb, std::string_view symptom,
                               std::string_view fault);

}  // namespace coverdx
