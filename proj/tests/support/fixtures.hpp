#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "coverdx/kb.hpp"

namespace coverdx::testing {

inline std::string fault_id(std::size_t i) { return "f" + std::to_string(i + 1); }
inline std::string symptom_id(std::size_t i) { return "s" + std::to_string(i + 1); }

/// Three faults, four symptoms, five links: the canonical worked example.
inline KnowledgeBase kb3() {
  std::vector<FaultNode> faults{
      {"f1", "Fault one", 0.1, {}}, {"f2", "Fault two", 0.1, {}}, {"f3", "Fault three", 0.05, {}}};
  std::vector<SymptomNode> symptoms;
  for (int i = 1; i <= 4; ++i) {
    const auto id = "s" + std::to_string(i);
    symptoms.push_back({id, "Symptom " + id, "Is " + id + " present?", 1.0, {}});
  }
  std::vector<CausalLink> links{{"f1", "s1", 0.9, {}},
                                {"f1", "s2", 0.6, {}},
                                {"f2", "s2", 0.8, {}},
                                {"f2", "s3", 0.7, {}},
                                {"f3", "s4", 0.95, {}}};
  return KnowledgeBase({"kb3", "1"}, std::move(faults), std::move(symptoms), std::move(links));
}

inline std::shared_ptr<const KnowledgeBase> kb3_ptr() {
  return std::make_shared<const KnowledgeBase>(kb3());
}

/// Random valid KB with 1..max_faults faults and 1..max_symptoms symptoms.
/// Every symptom gets at least one cause; strengths lie in (0,1].
inline KnowledgeBase random_kb(std::mt19937_64& rng, std::size_t max_faults = 10,
                               std::size_t max_symptoms = 12) {
  std::uniform_int_distribution<std::size_t> nf(1, max_faults);
  std::uniform_int_distribution<std::size_t> ns(1, max_symptoms);
  std::uniform_real_distribution<double> prior(0.01, 0.5);
  std::uniform_real_distribution<double> strength(0.05, 1.0);
  std::uniform_real_distribution<double> cost(0.5, 3.0);
  std::bernoulli_distribution link(0.3);

  const std::size_t n_faults = nf(rng);
  const std::size_t n_symptoms = ns(rng);
  std::vector<FaultNode> faults;
  for (std::size_t i = 0; i < n_faults; ++i) faults.push_back({fault_id(i), "", prior(rng), {}});
  std::vector<SymptomNode> symptoms;
  for (std::size_t i = 0; i < n_symptoms; ++i) {
    symptoms.push_back({symptom_id(i), "", "?", cost(rng), {}});
  }
  std::vector<CausalLink> links;
  std::uniform_int_distribution<std::size_t> pick(0, n_faults - 1);
  for (std::size_t s = 0; s < n_symptoms; ++s) {
    bool any = false;
    for (std::size_t f = 0; f < n_faults; ++f) {
      if (link(rng)) {
        links.push_back({fault_id(f), symptom_id(s), strength(rng), {}});
        any = true;
      }
    }
    if (!any) links.push_back({fault_id(pick(rng)), symptom_id(s), strength(rng), {}});
  }
  return KnowledgeBase({"random", "1"}, std::move(faults), std::move(symptoms), std::move(links));
}

/// Random subset of the KB's symptoms, each included with probability p.
inline SymptomSet random_symptoms(std::mt19937_64& rng, const KnowledgeBase& kb, double p) {
  std::bernoulli_distribution take(p);
  SymptomSet out;
  for (const auto& s : kb.symptoms()) {
    if (take(rng)) out.insert(s.id);
  }
  return out;
}

}  // namespace coverdx::testing
