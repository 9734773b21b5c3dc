#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "coverdx/kb.hpp"

namespace coverdx {

/// Agglomerative merge history. Leaves are clusters 0..n-1; the cluster
/// created by merge k has index n + k.
struct Dendrogram {
  struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;

    bool operator==(const Merge&) const = default;
  };

  std::vector<std::string> leaves;
  std::vector<Merge> merges;

  /// Members (leaf ids) of a cluster index, sorted.
  std::vector<std::string> members(std::size_t cluster) const;
  /// Clusters formed by every merge at height <= h; each leaf appears once.
  std::vector<std::vector<std::string>> cut(double height) const;
  /// Newick text; branch lengths are differences of merge heights.
  std::string to_newick() const;

  bool operator==(const Dendrogram&) const = default;
};

using Similarity = std::function<double(const std::string&, const std::string&)>;

enum class Linkage { Average };

/// Weighted Jaccard over causal-strength effect profiles; 1 when both are empty.
double fault_similarity(const KnowledgeBase& kb, std::string_view a, std::string_view b);
/// Same measure over cause profiles of two symptoms.
double symptom_similarity(const KnowledgeBase& kb, std::string_view a, std::string_view b);

/// Average-linkage agglomeration at height 1 - similarity. Among equally
/// similar pairs, the pair whose smaller member ids sort first is merged.
Dendrogram agglomerate(const std::vector<std::string>& items, const Similarity& similarity,
                       Linkage linkage = Linkage::Average);

/// Connected components of present symptoms under the shared-cause relation.
/// Each component is sorted; components are ordered by their first id.
std::vector<SymptomSet> partition_present(const KnowledgeBase& kb, const SymptomSet& present);

}  // namespace coverdx
