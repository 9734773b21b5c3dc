#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "coverdx/kb.hpp"

namespace coverdx {

enum class Finding { Present, Absent, Unknown };

std::string to_string(Finding finding);
std::optional<Finding> parse_finding(std::string_view text);

/// Findings per symptom. A symptom missing from the map has never been asked;
/// a recorded Unknown means the operator could not tell, which carries no
/// evidence but still counts as observed.
class ObservationState {
 public:
  ObservationState() = default;

  void set(const std::string& symptom, Finding finding) { findings_[symptom] = finding; }
  /// Finding for the symptom; Unknown when unlisted.
  Finding get(std::string_view symptom) const;
  bool observed(std::string_view symptom) const;

  SymptomSet present() const { return with(Finding::Present); }
  SymptomSet absent() const { return with(Finding::Absent); }

  const std::map<std::string, Finding, std::less<>>& entries() const { return findings_; }
  bool empty() const { return findings_.empty(); }

  /// Throws UnknownIdError for keys outside the KB.
  void validate(const KnowledgeBase& kb) const;

  static ObservationState from_sets(const SymptomSet& present, const SymptomSet& absent);

  bool operator==(const ObservationState&) const = default;

 private:
  SymptomSet with(Finding finding) const;

  std::map<std::string, Finding, std::less<>> findings_;
};

}  // namespace coverdx
