#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coverdx/errors.hpp"

namespace coverdx {

/// Ordered id set. Ordering of two sets is lexicographic over sorted ids.
using IdSet = std::set<std::string, std::less<>>;
using FaultSet = IdSet;
using SymptomSet = IdSet;

inline constexpr double kDefaultPrior = 0.05;

struct FaultNode {
  std::string id;
  std::string label;
  double prior = kDefaultPrior;
  std::optional<std::string> category;

  bool operator==(const FaultNode&) const = default;
};

struct SymptomNode {
  std::string id;
  std::string label;
  std::string question;
  double cost = 1.0;
  std::optional<std::string> category;

  bool operator==(const SymptomNode&) const = default;
};

/// Weighted arc of the fault/symptom relation. causal_strength is P(s | f);
/// evoking_strength, when given, is P(f | s).
struct CausalLink {
  std::string fault;
  std::string symptom;
  double causal_strength = 1.0;
  std::optional<double> evoking_strength;

  bool operator==(const CausalLink&) const = default;
};

enum class MemberKind { FaultCategory, SymptomCategory };

struct TaxonomyNode {
  std::string id;
  std::string label;
  std::optional<std::string> parent;
  MemberKind kind = MemberKind::FaultCategory;
  std::optional<double> weight;

  bool operator==(const TaxonomyNode&) const = default;
};

struct KbMeta {
  std::string name;
  std::string version;

  bool operator==(const KbMeta&) const = default;
};

enum class Severity { Error, Warning };

struct Violation {
  Severity severity = Severity::Error;
  std::string location;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Raised by load_kb when hard invariants fail.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// The fault/symptom relation graph with weights and taxonomies.
///
/// Immutable once constructed. The constructor tolerates invalid content so
/// that validate_kb can report on it; relation indexes skip links whose
/// endpoints do not exist.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  KnowledgeBase(KbMeta meta, std::vector<FaultNode> faults,
                std::vector<SymptomNode> symptoms, std::vector<CausalLink> links,
                std::vector<TaxonomyNode> taxonomy = {});

  const KbMeta& meta() const { return meta_; }
  const std::vector<FaultNode>& faults() const { return faults_; }
  const std::vector<SymptomNode>& symptoms() const { return symptoms_; }
  const std::vector<CausalLink>& links() const { return links_; }
  const std::vector<TaxonomyNode>& taxonomy() const { return taxonomy_; }

  bool has_fault(std::string_view id) const;
  bool has_symptom(std::string_view id) const;
  const FaultNode& fault(std::string_view id) const;
  const SymptomNode& symptom(std::string_view id) const;

  /// Symptoms the fault can produce.
  const SymptomSet& effects(std::string_view fault_id) const;
  /// Faults that can produce the symptom.
  const FaultSet& causes(std::string_view symptom_id) const;

  const CausalLink* find_link(std::string_view fault_id,
                              std::string_view symptom_id) const;
  /// c(s|f), or 0 when there is no link.
  double causal_strength(std::string_view fault_id,
                         std::string_view symptom_id) const;

  /// Fault ids in ascending order.
  FaultSet fault_ids() const;
  SymptomSet symptom_ids() const;

  void require_faults(const FaultSet& ids) const;
  void require_symptoms(const SymptomSet& ids) const;

  bool operator==(const KnowledgeBase& other) const;

 private:
  void build_indexes();

  KbMeta meta_;
  std::vector<FaultNode> faults_;
  std::vector<SymptomNode> symptoms_;
  std::vector<CausalLink> links_;
  std::vector<TaxonomyNode> taxonomy_;

  std::map<std::string, std::size_t, std::less<>> fault_index_;
  std::map<std::string, std::size_t, std::less<>> symptom_index_;
  std::map<std::pair<std::string, std::string>, std::size_t> link_index_;
  std::vector<SymptomSet> effects_;
  std::vector<FaultSet> causes_;
};

/// Checks hard invariants (errors) and soft ones (warnings).
std::vector<Violation> validate_kb(const KnowledgeBase& kb);

bool has_errors(const std::vector<Violation>& violations);

std::string to_string(Severity severity);
std::string to_string(MemberKind kind);
std::optional<MemberKind> parse_member_kind(std::string_view text);

/// Single-fault Bayes inversion used to compare stored evoking strengths
/// against the causal strengths. Returns nullopt when s has no causes.
std::optional<double> bayes_evoking_strength(const KnowledgeBase& kb,
                                             std::string_view symptom_id,
                                             std::string_view fault_id);

}  // namespace coverdx
