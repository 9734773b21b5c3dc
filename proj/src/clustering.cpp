#include "coverdx/clustering.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "coverdx/errors.hpp"

namespace coverdx {

namespace {

using Profile = std::map<std::string, double, std::less<>>;

// Walks the key union in sorted order so that the result is exactly symmetric.
double weighted_jaccard(const Profile& a, const Profile& b) {
  double num = 0.0;
  double den = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    double wa = 0.0;
    double wb = 0.0;
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      wa = (ia++)->second;
    } else if (ia == a.end() || ib->first < ia->first) {
      wb = (ib++)->second;
    } else {
      wa = (ia++)->second;
      wb = (ib++)->second;
    }
    num += std::min(wa, wb);
    den += std::max(wa, wb);
  }
  return den == 0.0 ? 1.0 : num / den;
}

Profile effect_profile(const KnowledgeBase& kb, std::string_view f) {
  Profile p;
  for (const auto& s : kb.effects(f)) p[s] = kb.causal_strength(f, s);
  return p;
}

Profile cause_profile(const KnowledgeBase& kb, std::string_view s) {
  Profile p;
  for (const auto& f : kb.causes(s)) p[f] = kb.causal_strength(f, s);
  return p;
}

}  // namespace

double fault_similarity(const KnowledgeBase& kb, std::string_view a, std::string_view b) {
  return weighted_jaccard(effect_profile(kb, a), effect_profile(kb, b));
}

double symptom_similarity(const KnowledgeBase& kb, std::string_view a, std::string_view b) {
  return weighted_jaccard(cause_profile(kb, a), cause_profile(kb, b));
}

Dendrogram agglomerate(const std::vector<std::string>& items, const Similarity& similarity,
                       Linkage) {
  if (items.empty()) throw ConfigError("cannot cluster an empty item list");
  const std::size_t n = items.size();

  Dendrogram tree;
  tree.leaves = items;

  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sim[i][j] = sim[j][i] = similarity(items[i], items[j]);
    }
  }

  struct Active {
    std::size_t cluster;
    std::vector<std::size_t> leaves;
    std::string min_id;
  };
  std::vector<Active> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, {i}, items[i]});

  double last_height = 0.0;
  while (active.size() > 1) {
    std::size_t best_a = 0;
    std::size_t best_b = 0;
    double best_sim = -std::numeric_limits<double>::infinity();
    std::pair<std::string, std::string> best_key;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        double total = 0.0;
        for (auto i : active[a].leaves) {
          for (auto j : active[b].leaves) total += sim[i][j];
        }
        const double avg =
            total / static_cast<double>(active[a].leaves.size() * active[b].leaves.size());
        auto key = std::minmax(active[a].min_id, active[b].min_id);
        std::pair<std::string, std::string> k{key.first, key.second};
        if (avg > best_sim || (avg == best_sim && k < best_key)) {
          best_sim = avg;
          best_a = a;
          best_b = b;
          best_key = std::move(k);
        }
      }
    }
    if (active[best_b].min_id < active[best_a].min_id) std::swap(best_a, best_b);
    // Average linkage never inverts; clamp rounding noise.
    const double height = std::max(last_height, 1.0 - best_sim);
    last_height = height;
    tree.merges.push_back({active[best_a].cluster, active[best_b].cluster, height});

    Active merged;
    merged.cluster = n + tree.merges.size() - 1;
    merged.leaves = active[best_a].leaves;
    merged.leaves.insert(merged.leaves.end(), active[best_b].leaves.begin(),
                         active[best_b].leaves.end());
    merged.min_id = std::min(active[best_a].min_id, active[best_b].min_id);
    const auto hi = std::max(best_a, best_b);
    const auto lo = std::min(best_a, best_b);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(hi));
    active[lo] = std::move(merged);
  }
  return tree;
}

std::vector<std::string> Dendrogram::members(std::size_t cluster) const {
  std::vector<std::string> out;
  std::vector<std::size_t> stack{cluster};
  while (!stack.empty()) {
    auto c = stack.back();
    stack.pop_back();
    if (c < leaves.size()) {
      out.push_back(leaves[c]);
    } else {
      const auto& m = merges.at(c - leaves.size());
      stack.push_back(m.left);
      stack.push_back(m.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::string>> Dendrogram::cut(double height) const {
  // Union-find over leaves, applying merges up to the cut height.
  std::vector<std::size_t> root(leaves.size() + merges.size());
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (std::size_t k = 0; k < merges.size(); ++k) {
    if (merges[k].height > height) break;
    const auto node = leaves.size() + k;
    root[find(merges[k].left)] = node;
    root[find(merges[k].right)] = node;
  }
  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < leaves.size(); ++i) groups[find(i)].push_back(leaves[i]);
  std::vector<std::vector<std::string>> out;
  for (auto& [_, g] : groups) {
    std::sort(g.begin(), g.end());
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Dendrogram::to_newick() const {
  std::ostringstream out;
  out << std::setprecision(6);
  auto height_of = [&](std::size_t c) {
    return c < leaves.size() ? 0.0 : merges[c - leaves.size()].height;
  };
  auto emit = [&](auto&& self, std::size_t c, double parent_height) -> void {
    if (c < leaves.size()) {
      out << leaves[c];
    } else {
      const auto& m = merges[c - leaves.size()];
      out << '(';
      self(self, m.left, m.height);
      out << ',';
      self(self, m.right, m.height);
      out << ')';
    }
    out << ':' << parent_height - height_of(c);
  };
  if (leaves.empty()) return ";";
  const std::size_t top = leaves.size() + merges.size() - 1;
  if (top < leaves.size()) {
    out << leaves[top];
  } else {
    const auto& m = merges.back();
    out << '(';
    emit(emit, m.left, m.height);
    out << ',';
    emit(emit, m.right, m.height);
    out << ')';
  }
  out << ';';
  return out.str();
}

std::vector<SymptomSet> partition_present(const KnowledgeBase& kb, const SymptomSet& present) {
  kb.require_symptoms(present);
  const std::vector<std::string> items(present.begin(), present.end());
  std::vector<std::size_t> root(items.size());
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  // Join symptoms through each shared cause.
  std::map<std::string, std::size_t> first_with_cause;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const auto& f : kb.causes(items[i])) {
      auto [it, inserted] = first_with_cause.emplace(f, i);
      if (!inserted) {
        auto a = find(i);
        auto b = find(it->second);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::map<std::size_t, SymptomSet> groups;
  for (std::size_t i = 0; i < items.size(); ++i) groups[find(i)].insert(items[i]);
  std::vector<SymptomSet> out;
  for (auto& [_, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end(),
            [](const SymptomSet& a, const SymptomSet& b) { return *a.begin() < *b.begin(); });
  return out;
}

}  // namespace coverdx
