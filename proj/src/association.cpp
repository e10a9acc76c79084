#include "localforest/association.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lf {

namespace {

using Itemset = std::vector<int>;  // sorted

bool contains_all(const Itemset& haystack, const Itemset& needles) {
  return std::includes(haystack.begin(), haystack.end(), needles.begin(),
                       needles.end());
}

// Joins two sorted k-itemsets sharing their first k-1 items into a
// (k+1)-candidate; the classic level-wise candidate generation.
std::vector<Itemset> candidates_from(const std::vector<Itemset>& level) {
  std::vector<Itemset> out;
  for (std::size_t a = 0; a < level.size(); ++a) {
    for (std::size_t b = a + 1; b < level.size(); ++b) {
      const Itemset& x = level[a];
      const Itemset& y = level[b];
      if (!std::equal(x.begin(), x.end() - 1, y.begin())) break;
      Itemset joined(x);
      joined.push_back(y.back());
      if (joined[joined.size() - 2] > joined.back()) {
        std::swap(joined[joined.size() - 2], joined.back());
      }
      out.push_back(std::move(joined));
    }
  }
  return out;
}

bool all_subsets_frequent(const Itemset& candidate,
                          const std::map<Itemset, std::int64_t>& frequent) {
  Itemset sub(candidate.size() - 1);
  for (std::size_t skip = 0; skip < candidate.size(); ++skip) {
    sub.clear();
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      if (i != skip) sub.push_back(candidate[i]);
    }
    if (!frequent.count(sub)) return false;
  }
  return true;
}

}  // namespace

std::vector<PathItemset> paths_to_itemsets(const std::vector<Path>& paths) {
  std::vector<PathItemset> out;
  out.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::set<int> features;
    for (const Condition& c : paths[i].conditions) features.insert(c.feature);
    out.push_back({static_cast<int>(i),
                   Itemset(features.begin(), features.end())});
  }
  return out;
}

std::vector<AssocRule> mine_rules(const std::vector<PathItemset>& itemsets,
                                  double min_support, int max_itemset_size) {
  if (itemsets.empty()) {
    throw std::invalid_argument("cannot mine rules from zero itemsets");
  }
  if (!(min_support >= 0.0 && min_support <= 1.0)) {
    throw std::invalid_argument("min_support must be in [0, 1]");
  }
  if (max_itemset_size < 2 || max_itemset_size > 20) {
    throw std::invalid_argument("max_itemset_size must be in [2, 20]");
  }

  const auto n = static_cast<double>(itemsets.size());
  // Small slack so a support sitting exactly on the cutoff is kept.
  const double min_count = min_support * n - 1e-9;

  std::vector<Itemset> transactions;
  transactions.reserve(itemsets.size());
  for (const auto& t : itemsets) transactions.push_back(t.items);

  std::map<Itemset, std::int64_t> frequent;

  std::map<int, std::int64_t> singles;
  for (const auto& t : transactions) {
    for (int item : t) singles[item]++;
  }
  std::vector<Itemset> level;
  for (const auto& [item, count] : singles) {
    if (static_cast<double>(count) >= min_count) {
      level.push_back({item});
      frequent.emplace(Itemset{item}, count);
    }
  }

  for (int size = 2; size <= max_itemset_size && level.size() > 1; ++size) {
    std::vector<Itemset> next;
    for (Itemset& cand : candidates_from(level)) {
      if (!all_subsets_frequent(cand, frequent)) continue;
      std::int64_t count = 0;
      for (const auto& t : transactions) {
        if (contains_all(t, cand)) count++;
      }
      if (static_cast<double>(count) >= min_count && count > 0) {
        frequent.emplace(cand, count);
        next.push_back(std::move(cand));
      }
    }
    level = std::move(next);
  }

  std::vector<AssocRule> rules;
  for (const auto& [itemset, count] : frequent) {
    const auto k = itemset.size();
    if (k < 2) continue;
    // Every non-empty proper subset of the itemset is an antecedent.
    for (std::uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
      AssocRule rule;
      for (std::size_t i = 0; i < k; ++i) {
        (mask & (1u << i) ? rule.antecedent : rule.consequent)
            .push_back(itemset[i]);
      }
      const std::int64_t cx = frequent.at(rule.antecedent);
      rule.support_antecedent = static_cast<double>(cx) / n;
      rule.confidence = static_cast<double>(count) / static_cast<double>(cx);
      rules.push_back(std::move(rule));
    }
  }

  std::sort(rules.begin(), rules.end(),
            [](const AssocRule& a, const AssocRule& b) {
              if (a.confidence != b.confidence) {
                return a.confidence < b.confidence;
              }
              if (a.support_antecedent != b.support_antecedent) {
                return a.support_antecedent > b.support_antecedent;
              }
              if (a.antecedent != b.antecedent) {
                return a.antecedent < b.antecedent;
              }
              return a.consequent < b.consequent;
            });
  return rules;
}

std::optional<RuleReduction> reduce_by_rules(const std::vector<Path>& paths,
                                             const std::vector<AssocRule>& rules,
                                             int quorum) {
  if (quorum < 1) throw std::invalid_argument("quorum must be >= 1");

  const std::vector<PathItemset> itemsets = paths_to_itemsets(paths);

  std::set<int> feature_set;
  std::vector<int> selection_order;
  for (const AssocRule& rule : rules) {
    bool added = false;
    for (int item : rule.antecedent) {
      if (feature_set.insert(item).second) {
        selection_order.push_back(item);
        added = true;
      }
    }
    if (!added) continue;  // antecedent already inside the feature set

    std::vector<int> survivors;
    for (const auto& t : itemsets) {
      bool inside = true;
      for (int item : t.items) {
        if (!feature_set.count(item)) {
          inside = false;
          break;
        }
      }
      if (inside) survivors.push_back(t.path_index);
    }
    if (static_cast<int>(survivors.size()) >= quorum) {
      RuleReduction result;
      result.feature_set = std::move(feature_set);
      result.selection_order = std::move(selection_order);
      result.paths.reserve(survivors.size());
      for (int idx : survivors) result.paths.push_back(paths[idx]);
      return result;
    }
  }
  return std::nullopt;
}

}  // namespace lf
