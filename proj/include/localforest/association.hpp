#pragma once

#include <optional>
#include <set>
#include <vector>

#include "localforest/paths.hpp"

namespace lf {

// A path viewed as a transaction: the set of features it tests, with the
// thresholds discarded.
struct PathItemset {
  int path_index = 0;
  std::vector<int> items;  // sorted, distinct feature indices
};

std::vector<PathItemset> paths_to_itemsets(const std::vector<Path>& paths);

// Association rule X => Y between disjoint, non-empty feature sets drawn
// from one frequent itemset. confidence = support(X u Y) / support(X).
struct AssocRule {
  std::vector<int> antecedent;  // sorted
  std::vector<int> consequent;  // sorted
  double support_antecedent = 0.0;
  double confidence = 0.0;
};

// Apriori over the itemsets: every rule X => Y derivable from a frequent
// itemset of size <= max_itemset_size whose support is >= min_support.
// Rules come back sorted by ascending confidence; ties break by descending
// antecedent support, then lexicographic antecedent, then lexicographic
// consequent, so the order is fully deterministic.
std::vector<AssocRule> mine_rules(const std::vector<PathItemset>& itemsets,
                                  double min_support,
                                  int max_itemset_size = 3);

struct RuleReduction {
  std::vector<Path> paths;            // surviving paths, original order
  std::set<int> feature_set;          // union of the applied antecedents
  std::vector<int> selection_order;   // features in the order they were added
};

// Walks the sorted rules, growing a feature set from their antecedents
// (skipping rules whose antecedent adds nothing), until at least `quorum`
// paths test only features inside the set. Returns nullopt when the rules
// run out before a quorum of paths survives; the caller is expected to fall
// back to the full path set.
std::optional<RuleReduction> reduce_by_rules(const std::vector<Path>& paths,
                                             const std::vector<AssocRule>& rules,
                                             int quorum);

}  // namespace lf
