#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coverdx/kb.hpp"
#include "coverdx/observations.hpp"

namespace coverdx {

/// One labeled case: the faults known to be present and what was observed.
struct CaseRecord {
  std::string case_id;
  FaultSet faults;
  ObservationState findings;
};

struct LinkEstimate {
  std::string fault;
  std::string symptom;
  double previous = 0.0;
  double estimate = 0.0;
  std::size_t isolated_cases = 0;  // single-fault cases of `fault` with the symptom observed
  std::size_t present_count = 0;
};

struct PriorEstimate {
  std::string fault;
  double previous = 0.0;
  double estimate = 0.0;
  std::size_t labeled_cases = 0;
};

struct EstimationReport {
  std::size_t total_cases = 0;
  std::size_t single_fault_cases = 0;
  /// Cases with zero or several labeled faults; they inform priors only.
  std::size_t skipped_cases = 0;
  std::vector<LinkEstimate> links;
  std::vector<PriorEstimate> priors;
  /// Links with no isolated support; their strength falls to the smoothing midpoint.
  std::vector<std::string> unsupported_links;
};

struct EstimationResult {
  KnowledgeBase kb;
  EstimationReport report;
};

inline constexpr double kSmoothing = 1.0;

/// Laplace-smoothed estimates:
///   c(s|f) = (n(f alone, s present) + 1) / (n(f alone, s observed) + 2)
///   prior(f) = (n(f labeled) + 1) / (N + 2)
/// Returns a new KnowledgeBase; the input is not modified.
EstimationResult estimate_weights(const std::vector<CaseRecord>& cases,
                                  const KnowledgeBase& kb);

/// Reads the case CSV: case_id, faults (semicolon-separated), then one column
/// per symptom id holding 1, 0 or blank.
std::vector<CaseRecord> read_cases_csv(std::istream& in);
void write_cases_csv(std::ostream& out, const std::vector<CaseRecord>& cases,
                     const std::vector<std::string>& symptom_columns);

nlohmann::json to_json(const EstimationReport& report);

}  // namespace coverdx
