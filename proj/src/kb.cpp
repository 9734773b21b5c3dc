#include "coverdx/kb.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace coverdx {

namespace {

const SymptomSet kEmptySet;

// Largest tolerated gap between a stored evoking strength and the one
// implied by priors and causal strengths.
constexpr double kEvokingMismatchTolerance = 0.05;

std::string quoted(std::string_view id) {
  return "'" + std::string(id) + "'";
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error([&] {
        std::ostringstream msg;
        msg << "knowledge base validation failed";
        for (const auto& v : violations) {
          if (v.severity == Severity::Error) msg << "; " << v.message;
        }
        return msg.str();
      }()),
      violations_(std::move(violations)) {}

KnowledgeBase::KnowledgeBase(KbMeta meta, std::vector<FaultNode> faults,
                             std::vector<SymptomNode> symptoms,
                             std::vector<CausalLink> links,
                             std::vector<TaxonomyNode> taxonomy)
    : meta_(std::move(meta)),
      faults_(std::move(faults)),
      symptoms_(std::move(symptoms)),
      links_(std::move(links)),
      taxonomy_(std::move(taxonomy)) {
  build_indexes();
}

void KnowledgeBase::build_indexes() {
  for (std::size_t i = 0; i < faults_.size(); ++i) {
    fault_index_.emplace(faults_[i].id, i);
  }
  for (std::size_t i = 0; i < symptoms_.size(); ++i) {
    symptom_index_.emplace(symptoms_[i].id, i);
  }
  effects_.assign(faults_.size(), {});
  causes_.assign(symptoms_.size(), {});
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& link = links_[i];
    auto f = fault_index_.find(link.fault);
    auto s = symptom_index_.find(link.symptom);
    if (f == fault_index_.end() || s == symptom_index_.end()) continue;
    if (!link_index_.emplace(std::make_pair(link.fault, link.symptom), i).second) {
      continue;
    }
    effects_[f->second].insert(link.symptom);
    causes_[s->second].insert(link.fault);
  }
}

bool KnowledgeBase::has_fault(std::string_view id) const {
  return fault_index_.find(id) != fault_index_.end();
}

bool KnowledgeBase::has_symptom(std::string_view id) const {
  return symptom_index_.find(id) != symptom_index_.end();
}

const FaultNode& KnowledgeBase::fault(std::string_view id) const {
  auto it = fault_index_.find(id);
  if (it == fault_index_.end()) throw UnknownIdError(std::string(id));
  return faults_[it->second];
}

const SymptomNode& KnowledgeBase::symptom(std::string_view id) const {
  auto it = symptom_index_.find(id);
  if (it == symptom_index_.end()) throw UnknownIdError(std::string(id));
  return symptoms_[it->second];
}

const SymptomSet& KnowledgeBase::effects(std::string_view fault_id) const {
  auto it = fault_index_.find(fault_id);
  if (it == fault_index_.end()) throw UnknownIdError(std::string(fault_id));
  return effects_[it->second];
}

const FaultSet& KnowledgeBase::causes(std::string_view symptom_id) const {
  auto it = symptom_index_.find(symptom_id);
  if (it == symptom_index_.end()) throw UnknownIdError(std::string(symptom_id));
  return causes_[it->second];
}

const CausalLink* KnowledgeBase::find_link(std::string_view fault_id,
                                           std::string_view symptom_id) const {
  auto it = link_index_.find({std::string(fault_id), std::string(symptom_id)});
  return it == link_index_.end() ? nullptr : &links_[it->second];
}

double KnowledgeBase::causal_strength(std::string_view fault_id,
                                      std::string_view symptom_id) const {
  const auto* link = find_link(fault_id, symptom_id);
  return link ? link->causal_strength : 0.0;
}

FaultSet KnowledgeBase::fault_ids() const {
  FaultSet out;
  for (const auto& [id, _] : fault_index_) out.insert(id);
  return out;
}

SymptomSet KnowledgeBase::symptom_ids() const {
  SymptomSet out;
  for (const auto& [id, _] : symptom_index_) out.insert(id);
  return out;
}

void KnowledgeBase::require_faults(const FaultSet& ids) const {
  for (const auto& id : ids) {
    if (!has_fault(id)) throw UnknownIdError(id);
  }
}

void KnowledgeBase::require_symptoms(const SymptomSet& ids) const {
  for (const auto& id : ids) {
    if (!has_symptom(id)) throw UnknownIdError(id);
  }
}

bool KnowledgeBase::operator==(const KnowledgeBase& other) const {
  return meta_ == other.meta_ && faults_ == other.faults_ &&
         symptoms_ == other.symptoms_ && links_ == other.links_ &&
         taxonomy_ == other.taxonomy_;
}

std::optional<double> bayes_evoking_strength(const KnowledgeBase& kb,
                                             std::string_view symptom_id,
                                             std::string_view fault_id) {
  const auto& causes = kb.causes(symptom_id);
  double total = 0.0;
  for (const auto& g : causes) {
    total += kb.fault(g).prior * kb.causal_strength(g, symptom_id);
  }
  if (causes.empty()) return std::nullopt;
  if (total <= 0.0) return 0.0;
  return kb.fault(fault_id).prior * kb.causal_strength(fault_id, symptom_id) / total;
}

std::vector<Violation> validate_kb(const KnowledgeBase& kb) {
  std::vector<Violation> out;
  auto error = [&](std::string location, std::string message) {
    out.push_back({Severity::Error, std::move(location), std::move(message)});
  };
  auto warn = [&](std::string location, std::string message) {
    out.push_back({Severity::Warning, std::move(location), std::move(message)});
  };

  std::map<std::string, const TaxonomyNode*, std::less<>> tax;
  for (const auto& node : kb.taxonomy()) {
    if (node.id.empty()) error("taxonomy", "taxonomy node with empty id");
    if (!tax.emplace(node.id, &node).second) {
      error("taxonomy/" + node.id, "duplicate taxonomy id " + quoted(node.id));
    }
  }

  auto check_category = [&](const std::optional<std::string>& category,
                            MemberKind kind, const std::string& location) {
    if (!category) return;
    auto it = tax.find(*category);
    if (it == tax.end()) {
      error(location, "unknown taxonomy node " + quoted(*category));
    } else if (it->second->kind != kind) {
      error(location, "category " + quoted(*category) + " has kind " +
                          to_string(it->second->kind));
    }
  };

  std::set<std::string, std::less<>> seen;
  for (const auto& f : kb.faults()) {
    const auto loc = "faults/" + f.id;
    if (f.id.empty()) error("faults", "fault with empty id");
    if (!seen.insert(f.id).second) error(loc, "duplicate fault id " + quoted(f.id));
    if (!(f.prior >= 0.0 && f.prior <= 1.0)) {
      error(loc, "prior out of range for " + quoted(f.id));
    }
    check_category(f.category, MemberKind::FaultCategory, loc);
  }
  seen.clear();
  for (const auto& s : kb.symptoms()) {
    const auto loc = "symptoms/" + s.id;
    if (s.id.empty()) error("symptoms", "symptom with empty id");
    if (!seen.insert(s.id).second) error(loc, "duplicate symptom id " + quoted(s.id));
    if (kb.has_fault(s.id)) error(loc, "id " + quoted(s.id) + " is both a fault and a symptom");
    if (!(s.cost >= 0.0) || !std::isfinite(s.cost)) {
      error(loc, "cost out of range for " + quoted(s.id));
    }
    check_category(s.category, MemberKind::SymptomCategory, loc);
  }

  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& link : kb.links()) {
    const auto loc = "links/" + link.fault + "->" + link.symptom;
    if (!kb.has_fault(link.fault)) {
      error(loc, "link references unknown fault id " + quoted(link.fault));
    }
    if (!kb.has_symptom(link.symptom)) {
      error(loc, "link references unknown symptom id " + quoted(link.symptom));
    }
    if (!pairs.emplace(link.fault, link.symptom).second) {
      error(loc, "duplicate link");
    }
    if (!(link.causal_strength > 0.0 && link.causal_strength <= 1.0)) {
      error(loc, "strength out of range");
    }
    if (link.evoking_strength &&
        !(*link.evoking_strength >= 0.0 && *link.evoking_strength <= 1.0)) {
      error(loc, "evoking strength out of range");
    }
  }

  // Taxonomy forest: unknown parents, cycles, kind changes along a tree.
  for (const auto& node : kb.taxonomy()) {
    const auto loc = "taxonomy/" + node.id;
    if (node.weight && !(*node.weight >= 0.0 && *node.weight <= 1.0)) {
      error(loc, "taxonomy weight out of range");
    }
    if (!node.parent) continue;
    auto parent = tax.find(*node.parent);
    if (parent == tax.end()) {
      error(loc, "unknown taxonomy parent " + quoted(*node.parent));
    } else if (parent->second->kind != node.kind) {
      error(loc, "taxonomy kind differs from parent " + quoted(*node.parent));
    }
  }
  std::set<std::string, std::less<>> reported_cycle;
  for (const auto& node : kb.taxonomy()) {
    std::set<std::string, std::less<>> path{node.id};
    const TaxonomyNode* cur = &node;
    while (cur->parent) {
      auto it = tax.find(*cur->parent);
      if (it == tax.end()) break;
      cur = it->second;
      if (!path.insert(cur->id).second) {
        // Report each cycle once, keyed by its smallest member.
        std::set<std::string, std::less<>> cycle{cur->id};
        for (const TaxonomyNode* walk = tax.at(*cur->parent); walk != cur;
             walk = tax.at(*walk->parent)) {
          cycle.insert(walk->id);
        }
        if (reported_cycle.insert(*cycle.begin()).second) {
          error("taxonomy/" + *cycle.begin(), "taxonomy cycle through " + quoted(*cycle.begin()));
        }
        break;
      }
    }
  }

  // Warnings.
  for (const auto& s : kb.symptoms()) {
    if (kb.has_symptom(s.id) && kb.causes(s.id).empty()) {
      warn("symptoms/" + s.id, "orphan symptom " + s.id);
    }
  }
  if (!kb.taxonomy().empty()) {
    std::set<std::string, std::less<>> used;
    auto mark = [&](const std::optional<std::string>& category) {
      std::set<std::string, std::less<>> guard;
      for (auto id = category; id && guard.insert(*id).second;) {
        used.insert(*id);
        auto it = tax.find(*id);
        if (it == tax.end()) break;
        id = it->second->parent;
      }
    };
    for (const auto& f : kb.faults()) mark(f.category);
    for (const auto& s : kb.symptoms()) mark(s.category);
    for (const auto& node : kb.taxonomy()) {
      if (!used.contains(node.id)) {
        warn("taxonomy/" + node.id, "unreachable taxonomy node " + node.id);
      }
    }
  }
  if (!has_errors(out)) {
    for (const auto& link : kb.links()) {
      if (!link.evoking_strength) continue;
      auto implied = bayes_evoking_strength(kb, link.symptom, link.fault);
      if (implied && std::abs(*implied - *link.evoking_strength) > kEvokingMismatchTolerance) {
        std::ostringstream msg;
        msg << "evoking strength " << *link.evoking_strength
            << " inconsistent with priors and causal strengths (implied " << *implied << ")";
        warn("links/" + link.fault + "->" + link.symptom, msg.str());
      }
    }
  }
  return out;
}

bool has_errors(const std::vector<Violation>& violations) {
  for (const auto& v : violations) {
    if (v.severity == Severity::Error) return true;
  }
  return false;
}

std::string to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

std::string to_string(MemberKind kind) {
  return kind == MemberKind::FaultCategory ? "fault-category" : "symptom-category";
}

std::optional<MemberKind> parse_member_kind(std::string_view text) {
  if (text == "fault-category" || text == "fault") return MemberKind::FaultCategory;
  if (text == "symptom-category" || text == "symptom") return MemberKind::SymptomCategory;
  return std::nullopt;
}

}  // namespace coverdx
