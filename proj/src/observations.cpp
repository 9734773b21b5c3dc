#include "coverdx/observations.hpp"

namespace coverdx {

std::string to_string(Finding finding) {
  switch (finding) {
    case Finding::Present: return "present";
    case Finding::Absent: return "absent";
    case Finding::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Finding> parse_finding(std::string_view text) {
  if (text == "present" || text == "1" || text == "yes" || text == "y") return Finding::Present;
  if (text == "absent" || text == "0" || text == "no" || text == "n") return Finding::Absent;
  if (text == "unknown" || text == "?" || text.empty()) return Finding::Unknown;
  return std::nullopt;
}

Finding ObservationState::get(std::string_view symptom) const {
  auto it = findings_.find(symptom);
  return it == findings_.end() ? Finding::Unknown : it->second;
}

bool ObservationState::observed(std::string_view symptom) const {
  return findings_.find(symptom) != findings_.end();
}

SymptomSet ObservationState::with(Finding finding) const {
  SymptomSet out;
  for (const auto& [s, f] : findings_) {
    if (f == finding) out.insert(s);
  }
  return out;
}

void ObservationState::validate(const KnowledgeBase& kb) const {
  for (const auto& [s, _] : findings_) {
    if (!kb.has_symptom(s)) throw UnknownIdError(s);
  }
}

ObservationState ObservationState::from_sets(const SymptomSet& present,
                                             const SymptomSet& absent) {
  ObservationState obs;
  for (const auto& s : present) obs.set(s, Finding::Present);
  for (const auto& s : absent) obs.set(s, Finding::Absent);
  return obs;
}

}  // namespace coverdx
