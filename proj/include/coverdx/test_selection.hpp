#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coverdx/kb.hpp"
#include "coverdx/observations.hpp"
#include "coverdx/scoring.hpp"

namespace coverdx {

/// Gains at or below this are treated as zero.
inline constexpr double kGainEpsilon = 1e-12;

/// Shannon entropy (bits) of the candidate posteriors.
double posterior_entropy(const std::vector<ScoredHypothesis>& ranked);

/// Expected entropy drop from asking whether `symptom` is present, with
/// outcome probabilities taken from the noisy-OR predictive distribution of
/// each candidate. Throws AlreadyObservedError if the symptom is in `obs`.
double information_gain(const KnowledgeBase& kb, const std::vector<ScoredHypothesis>& ranked,
                        const ObservationState& obs, std::string_view symptom,
                        double leak = 0.0);

struct QuestionScore {
  std::string symptom;
  double gain = 0.0;
  double priority = 0.0;  // gain, or gain per unit cost
};

/// Gain for every unobserved symptom, in symptom id order.
std::vector<QuestionScore> score_questions(const KnowledgeBase& kb,
                                           const std::vector<ScoredHypothesis>& ranked,
                                           const ObservationState& obs, bool costs_enabled,
                                           double leak = 0.0);

/// Most informative unobserved symptom; ties go to the smallest id. Returns
/// nullopt when no symptom has gain above kGainEpsilon.
std::optional<std::string> next_question(const KnowledgeBase& kb,
                                         const std::vector<ScoredHypothesis>& ranked,
                                         const ObservationState& obs, bool costs_enabled,
                                         double leak = 0.0);

}  // namespace coverdx
