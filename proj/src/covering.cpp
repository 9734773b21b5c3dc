#include "coverdx/covering.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "coverdx/errors.hpp"

namespace coverdx {

namespace {

// A set of faults sharing one coverage signature over the present symptoms.
struct FaultClass {
  std::vector<std::size_t> signature;  // indexes into the present-symptom list
  FaultSet members;
};

using ClassCover = std::vector<std::size_t>;  // indexes into the class list

// Enumerates minimal hitting sets at class level. Branching always happens on
// an uncovered symptom, so every minimal hitting set H is reached along a path
// whose partial selections stay inside H.
class HittingSetSearch {
 public:
  HittingSetSearch(const std::vector<FaultClass>& classes, std::size_t symptom_count,
                   std::size_t max_size)
      : classes_(classes), max_size_(max_size), hits_(symptom_count, 0),
        classes_of_symptom_(symptom_count) {
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      for (auto s : classes_[c].signature) classes_of_symptom_[s].push_back(c);
    }
  }

  std::set<ClassCover> run() {
    recurse();
    return std::move(found_);
  }

 private:
  void recurse() {
    // Pick the uncovered symptom with the fewest candidate classes.
    std::size_t best = hits_.size();
    for (std::size_t s = 0; s < hits_.size(); ++s) {
      if (hits_[s] != 0) continue;
      if (best == hits_.size() ||
          classes_of_symptom_[s].size() < classes_of_symptom_[best].size()) {
        best = s;
      }
    }
    if (best == hits_.size()) {
      if (irredundant()) {
        ClassCover cover = chosen_;
        std::sort(cover.begin(), cover.end());
        found_.insert(std::move(cover));
      }
      return;
    }
    if (chosen_.size() >= max_size_) return;
    for (auto c : classes_of_symptom_[best]) {
      chosen_.push_back(c);
      for (auto s : classes_[c].signature) ++hits_[s];
      recurse();
      for (auto s : classes_[c].signature) --hits_[s];
      chosen_.pop_back();
    }
  }

  // Every chosen class must be the sole hitter of some symptom.
  bool irredundant() const {
    for (auto c : chosen_) {
      bool needed = false;
      for (auto s : classes_[c].signature) needed = needed || hits_[s] == 1;
      if (!needed) return false;
    }
    return true;
  }

  const std::vector<FaultClass>& classes_;
  std::size_t max_size_;
  std::vector<int> hits_;
  std::vector<std::vector<std::size_t>> classes_of_symptom_;
  ClassCover chosen_;
  std::set<ClassCover> found_;
};

}  // namespace

bool cover_order(const FaultSet& a, const FaultSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool is_cover(const KnowledgeBase& kb, const FaultSet& faults, const SymptomSet& present) {
  kb.require_faults(faults);
  kb.require_symptoms(present);
  for (const auto& s : present) {
    const auto& causes = kb.causes(s);
    bool hit = std::any_of(faults.begin(), faults.end(),
                           [&](const std::string& f) { return causes.contains(f); });
    if (!hit) return false;
  }
  return true;
}

GeneratorSet compile_generators(const KnowledgeBase& kb, const SymptomSet& present,
                                std::size_t max_size) {
  if (max_size == 0) throw ConfigError("max cover size must be positive");
  kb.require_symptoms(present);

  GeneratorSet result;
  result.max_size = max_size;

  const std::vector<std::string> symptoms(present.begin(), present.end());
  std::map<std::vector<std::size_t>, FaultSet> by_signature;
  for (const auto& f : kb.fault_ids()) {
    const auto& effects = kb.effects(f);
    std::vector<std::size_t> signature;
    for (std::size_t i = 0; i < symptoms.size(); ++i) {
      if (effects.contains(symptoms[i])) signature.push_back(i);
    }
    if (!signature.empty()) by_signature[signature].insert(f);
  }
  std::vector<FaultClass> classes;
  for (auto& [signature, members] : by_signature) {
    classes.push_back({signature, std::move(members)});
  }

  for (const auto& cover : HittingSetSearch(classes, symptoms.size(), max_size).run()) {
    GeneratorSet::Generator generator;
    for (auto c : cover) generator.push_back(classes[c].members);
    std::sort(generator.begin(), generator.end());
    result.generators.push_back(std::move(generator));
  }
  std::sort(result.generators.begin(), result.generators.end());
  return result;
}

std::vector<FaultSet> GeneratorSet::expand() const {
  std::set<FaultSet> all;
  for (const auto& generator : generators) {
    std::vector<FaultSet> partial{FaultSet{}};
    for (const auto& component : generator) {
      std::vector<FaultSet> next;
      for (const auto& base : partial) {
        for (const auto& f : component) {
          auto extended = base;
          extended.insert(f);
          next.push_back(std::move(extended));
        }
      }
      partial = std::move(next);
    }
    all.insert(partial.begin(), partial.end());
  }
  std::vector<FaultSet> out(all.begin(), all.end());
  std::sort(out.begin(), out.end(), cover_order);
  return out;
}

std::size_t GeneratorSet::count() const {
  std::size_t total = 0;
  for (const auto& generator : generators) {
    std::size_t n = 1;
    for (const auto& component : generator) n *= component.size();
    total += n;
  }
  return total;
}

std::vector<FaultSet> irredundant_covers(const KnowledgeBase& kb, const SymptomSet& present,
                                         std::size_t max_size) {
  return compile_generators(kb, present, max_size).expand();
}

std::vector<std::string> single_fault_candidates(const KnowledgeBase& kb,
                                                 const SymptomSet& present) {
  kb.require_symptoms(present);
  std::vector<std::string> out;
  for (const auto& f : kb.fault_ids()) {
    const auto& effects = kb.effects(f);
    if (std::includes(effects.begin(), effects.end(), present.begin(), present.end())) {
      out.push_back(f);
    }
  }
  return out;
}

}  // namespace coverdx
