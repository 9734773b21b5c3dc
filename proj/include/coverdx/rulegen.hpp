#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "coverdx/kb.hpp"

namespace coverdx {

inline constexpr std::size_t kDefaultMaxAntecedent = 3;

/// Set-of-symptoms => fault.
struct DeductiveRule {
  SymptomSet antecedent;
  std::string consequent;
  double confidence = 0.0;

  bool operator==(const DeductiveRule&) const = default;
};

struct RuleSet {
  std::vector<DeductiveRule> rules;
  /// Faults for which no discriminating antecedent exists within the bound.
  std::vector<std::string> undiscriminated;
};

struct RuleViolation {
  std::size_t rule_index = 0;
  std::string message;
};

/// Subset-minimal A within effects(f), |A| <= max_antecedent, such that no
/// other fault produces every symptom of A. Ordered by size, then ids.
std::vector<SymptomSet> discriminating_sets(const KnowledgeBase& kb, const std::string& fault,
                                            std::size_t max_antecedent = kDefaultMaxAntecedent);

/// One rule per discriminating set of every fault. Confidence is the
/// posterior of the consequent given the antecedent present, taken over the
/// single-fault hypotheses plus the empty hypothesis.
RuleSet generate_rules(const KnowledgeBase& kb,
                       std::size_t max_antecedent = kDefaultMaxAntecedent);

/// Under the single-fault closed-world reading, checks that each antecedent
/// is explained by its consequent and by no other single fault.
std::vector<RuleViolation> verify_rules(const KnowledgeBase& kb,
                                        const std::vector<DeductiveRule>& rules);

nlohmann::json to_json(const std::vector<DeductiveRule>& rules);
std::vector<DeductiveRule> rules_from_json(const nlohmann::json& doc);

}  // namespace coverdx
