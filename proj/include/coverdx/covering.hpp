#pragma once

#include <cstddef>
#include <vector>

#include "coverdx/kb.hpp"

namespace coverdx {

inline constexpr std::size_t kDefaultMaxCoverSize = 4;

/// Product-form encoding of a family of irredundant covers.
///
/// A generator is a list of pairwise-disjoint fault classes; it stands for
/// every fault set obtained by picking one fault from each class. Faults in
/// one class are interchangeable because they explain exactly the same
/// present symptoms.
struct GeneratorSet {
  using Generator = std::vector<FaultSet>;

  std::vector<Generator> generators;
  std::size_t max_size = kDefaultMaxCoverSize;

  /// All fault sets represented, de-duplicated, in canonical cover order.
  std::vector<FaultSet> expand() const;
  /// Number of covers represented (before de-duplication).
  std::size_t count() const;
};

/// Canonical cover order: cardinality, then lexicographic over sorted ids.
bool cover_order(const FaultSet& a, const FaultSet& b);

/// True iff every present symptom has at least one cause in the fault set.
bool is_cover(const KnowledgeBase& kb, const FaultSet& faults, const SymptomSet& present);

/// Every fault set of size <= max_size that covers the present symptoms and
/// has no proper subset that does (the minimal hitting sets of the per-symptom
/// cause sets), in canonical cover order.
std::vector<FaultSet> irredundant_covers(const KnowledgeBase& kb, const SymptomSet& present,
                                         std::size_t max_size = kDefaultMaxCoverSize);

GeneratorSet compile_generators(const KnowledgeBase& kb, const SymptomSet& present,
                                std::size_t max_size = kDefaultMaxCoverSize);

/// Faults whose effect set contains every present symptom, ordered by id.
std::vector<std::string> single_fault_candidates(const KnowledgeBase& kb,
                                                 const SymptomSet& present);

}  // namespace coverdx
