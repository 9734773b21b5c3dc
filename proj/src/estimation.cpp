#include "coverdx/estimation.hpp"

#include <map>

#include "coverdx/kb_io.hpp"

namespace coverdx {

EstimationResult estimate_weights(const std::vector<CaseRecord>& cases,
                                  const KnowledgeBase& kb) {
  if (cases.empty()) throw EstimationError("no cases to estimate from");
  for (const auto& c : cases) {
    kb.require_faults(c.faults);
    c.findings.validate(kb);
  }

  EstimationReport report;
  report.total_cases = cases.size();

  std::map<std::string, std::size_t, std::less<>> labeled;
  std::map<std::string, std::vector<const CaseRecord*>, std::less<>> isolated;
  for (const auto& c : cases) {
    for (const auto& f : c.faults) ++labeled[f];
    if (c.faults.size() == 1) {
      ++report.single_fault_cases;
      isolated[*c.faults.begin()].push_back(&c);
    } else {
      ++report.skipped_cases;
    }
  }

  const double n = static_cast<double>(cases.size());
  std::vector<FaultNode> faults = kb.faults();
  for (auto& f : faults) {
    PriorEstimate est;
    est.fault = f.id;
    est.previous = f.prior;
    est.labeled_cases = labeled.contains(f.id) ? labeled.at(f.id) : 0;
    est.estimate = (static_cast<double>(est.labeled_cases) + kSmoothing) / (n + 2 * kSmoothing);
    f.prior = est.estimate;
    report.priors.push_back(est);
  }

  std::vector<CausalLink> links = kb.links();
  for (auto& link : links) {
    LinkEstimate est;
    est.fault = link.fault;
    est.symptom = link.symptom;
    est.previous = link.causal_strength;
    if (auto it = isolated.find(link.fault); it != isolated.end()) {
      for (const auto* c : it->second) {
        const auto finding = c->findings.get(link.symptom);
        if (finding == Finding::Unknown) continue;
        ++est.isolated_cases;
        if (finding == Finding::Present) ++est.present_count;
      }
    }
    est.estimate = (static_cast<double>(est.present_count) + kSmoothing) /
                   (static_cast<double>(est.isolated_cases) + 2 * kSmoothing);
    if (est.isolated_cases == 0) {
      report.unsupported_links.push_back(link.fault + "->" + link.symptom);
    }
    link.causal_strength = est.estimate;
    report.links.push_back(est);
  }

  KnowledgeBase updated(kb.meta(), std::move(faults), kb.symptoms(), std::move(links),
                        kb.taxonomy());
  return {std::move(updated), std::move(report)};
}

nlohmann::json to_json(const EstimationReport& report) {
  nlohmann::json out;
  out["total_cases"] = report.total_cases;
  out["single_fault_cases"] = report.single_fault_cases;
  out["skipped_cases"] = report.skipped_cases;
  out["links"] = nlohmann::json::array();
  for (const auto& l : report.links) {
    out["links"].push_back({{"fault", l.fault},
                            {"symptom", l.symptom},
                            {"previous", l.previous},
                            {"estimate", l.estimate},
                            {"isolated_cases", l.isolated_cases},
                            {"present", l.present_count}});
  }
  out["priors"] = nlohmann::json::array();
  for (const auto& p : report.priors) {
    out["priors"].push_back({{"fault", p.fault},
                             {"previous", p.previous},
                             {"estimate", p.estimate},
                             {"labeled_cases", p.labeled_cases}});
  }
  out["no_support"] = report.unsupported_links;
  return out;
}

}  // namespace coverdx
