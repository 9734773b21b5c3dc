#include "coverdx/rulegen.hpp"

#include <algorithm>

#include "coverdx/kb_io.hpp"
#include "coverdx/observations.hpp"
#include "coverdx/scoring.hpp"

namespace coverdx {

namespace {

bool contains_all(const IdSet& outer, const IdSet& inner) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

bool explained_by_other(const KnowledgeBase& kb, const std::string& fault,
                        const SymptomSet& antecedent) {
  for (const auto& g : kb.fault_ids()) {
    if (g != fault && contains_all(kb.effects(g), antecedent)) return true;
  }
  return false;
}

// Visits all k-subsets of `pool` in lexicographic order.
template <typename Visit>
void for_each_combination(const std::vector<std::string>& pool, std::size_t k, Visit&& visit) {
  if (k > pool.size()) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    SymptomSet subset;
    for (auto i : idx) subset.insert(pool[i]);
    visit(subset);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == pool.size() - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double rule_confidence(const KnowledgeBase& kb, const std::string& fault,
                       const SymptomSet& antecedent) {
  ObservationState obs;
  for (const auto& s : antecedent) obs.set(s, Finding::Present);
  double target = 0.0;
  double total = hypothesis_score(kb, {}, obs);
  for (const auto& g : kb.fault_ids()) {
    const double score = hypothesis_score(kb, {g}, obs);
    total += score;
    if (g == fault) target = score;
  }
  return total > 0.0 ? target / total : 0.0;
}

}  // namespace

std::vector<SymptomSet> discriminating_sets(const KnowledgeBase& kb, const std::string& fault,
                                            std::size_t max_antecedent) {
  const auto& effects = kb.effects(fault);
  const std::vector<std::string> pool(effects.begin(), effects.end());
  std::vector<SymptomSet> found;
  for (std::size_t k = 1; k <= std::min(max_antecedent, pool.size()); ++k) {
    for_each_combination(pool, k, [&](const SymptomSet& candidate) {
      // Discrimination is upward closed, so minimality only needs a check
      // against smaller sets already found.
      for (const auto& f : found) {
        if (contains_all(candidate, f)) return;
      }
      if (!explained_by_other(kb, fault, candidate)) found.push_back(candidate);
    });
  }
  return found;
}

RuleSet generate_rules(const KnowledgeBase& kb, std::size_t max_antecedent) {
  RuleSet out;
  for (const auto& f : kb.fault_ids()) {
    auto sets = discriminating_sets(kb, f, max_antecedent);
    if (sets.empty()) out.undiscriminated.push_back(f);
    for (auto& a : sets) {
      const double confidence = rule_confidence(kb, f, a);
      out.rules.push_back({std::move(a), f, confidence});
    }
  }
  return out;
}

std::vector<RuleViolation> verify_rules(const KnowledgeBase& kb,
                                        const std::vector<DeductiveRule>& rules) {
  std::vector<RuleViolation> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& rule = rules[i];
    auto fail = [&](std::string message) { out.push_back({i, std::move(message)}); };
    if (!kb.has_fault(rule.consequent)) {
      fail("unknown fault " + rule.consequent);
      continue;
    }
    bool ids_ok = true;
    for (const auto& s : rule.antecedent) {
      if (!kb.has_symptom(s)) {
        fail("unknown symptom " + s);
        ids_ok = false;
      }
    }
    if (!ids_ok) continue;
    if (rule.antecedent.empty()) {
      fail("empty antecedent");
      continue;
    }
    if (!contains_all(kb.effects(rule.consequent), rule.antecedent)) {
      fail("antecedent not produced by " + rule.consequent);
    }
    for (const auto& g : kb.fault_ids()) {
      if (g != rule.consequent && contains_all(kb.effects(g), rule.antecedent)) {
        fail(g + " also explains the antecedent");
      }
    }
    if (!(rule.confidence >= 0.0 && rule.confidence <= 1.0)) {
      fail("confidence out of range");
    }
  }
  return out;
}

nlohmann::json to_json(const std::vector<DeductiveRule>& rules) {
  auto out = nlohmann::json::array();
  for (const auto& r : rules) {
    out.push_back({{"antecedent", to_json(r.antecedent)},
                   {"consequent", r.consequent},
                   {"confidence", r.confidence}});
  }
  return out;
}

std::vector<DeductiveRule> rules_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("rule document must be an array");
  std::vector<DeductiveRule> rules;
  try {
    for (const auto& r : doc) {
      rules.push_back({id_set_from_json(r.at("antecedent")),
                       r.at("consequent").get<std::string>(),
                       r.at("confidence").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed rule: ") + e.what());
  }
  return rules;
}

}  // namespace coverdx
