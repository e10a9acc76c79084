#include "localforest/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "localforest/association.hpp"
#include "localforest/clustering.hpp"
#include "localforest/rng.hpp"

namespace lf {

namespace {

std::set<int> feature_union(const std::vector<Path>& paths) {
  std::set<int> features;
  for (const Path& p : paths) {
    for (const Condition& c : p.conditions) features.insert(c.feature);
  }
  return features;
}

double ratio(int original, int reduced) {
  if (original <= 0) return 0.0;
  return static_cast<double>(original - reduced) / static_cast<double>(original);
}

}  // namespace

int quorum(int n_estimators) {
  if (n_estimators < 1) {
    throw std::invalid_argument("n_estimators must be >= 1");
  }
  return n_estimators / 2 + 1;
}

ReduceResult reduce(const Forest& forest, const Instance& instance,
                    const PipelineConfig& config) {
  if (!(config.min_path_fraction >= 0.0 && config.min_path_fraction <= 1.0)) {
    throw std::invalid_argument("min_path_fraction must be in [0, 1]");
  }

  std::vector<Path> paths = extract_paths(forest, instance);
  const int k = static_cast<int>(paths.size());
  const int full_quorum = quorum(forest.n_estimators());

  ReduceResult result;
  result.report.original_path_count = k;
  result.report.original_feature_count =
      static_cast<int>(feature_union(paths).size());

  if (k < full_quorum) {
    // A tied vote can leave the winner with fewer paths than the quorum;
    // nothing can be trimmed without risking the prediction.
    result.report.quorum_used = k;
    result.report.quorum_degraded = true;
    result.paths = std::move(paths);
  } else {
    const int floor_from_fraction = static_cast<int>(
        std::ceil(config.min_path_fraction * static_cast<double>(k)));
    const int target = std::min(k, std::max(full_quorum, floor_from_fraction));
    result.report.quorum_used = full_quorum;

    std::vector<Path> kept = std::move(paths);

    if (config.use_association_rules && !kept.empty()) {
      const auto rules = mine_rules(paths_to_itemsets(kept), config.min_support,
                                    config.max_itemset_size);
      auto reduction = reduce_by_rules(kept, rules, target);
      if (reduction && reduction->paths.size() != kept.size()) {
        result.report.techniques_fired.insert(Technique::association_rules);
      }
      if (reduction) kept = std::move(reduction->paths);
    }

    if (config.use_clustering && !kept.empty()) {
      const int n = static_cast<int>(kept.size());
      int n_medoids = config.n_medoids.value_or(static_cast<int>(
          std::ceil(std::sqrt(static_cast<double>(n)))));
      n_medoids = std::clamp(n_medoids, 1, n);
      const auto matrix = build_similarity_matrix(kept, forest.features);
      auto clustered = kmedoids_reduce(matrix, kept, forest.n_estimators(),
                                       n_medoids, mix_seed(config.seed, 1),
                                       target);
      if (clustered.size() != kept.size()) {
        result.report.techniques_fired.insert(Technique::clustering);
        kept = std::move(clustered);
      }
    }

    if (config.use_random && static_cast<int>(kept.size()) > target) {
      kept = random_trim(kept, forest.n_estimators(), mix_seed(config.seed, 2),
                         target);
      result.report.techniques_fired.insert(Technique::random_selection);
    }

    result.paths = std::move(kept);
  }

  result.report.reduced_path_count = static_cast<int>(result.paths.size());
  result.report.reduced_feature_count =
      static_cast<int>(feature_union(result.paths).size());
  result.report.path_reduction =
      ratio(result.report.original_path_count, result.report.reduced_path_count);
  result.report.feature_reduction = ratio(result.report.original_feature_count,
                                          result.report.reduced_feature_count);
  return result;
}

}  // namespace lf
