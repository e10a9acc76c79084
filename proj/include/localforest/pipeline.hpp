#pragma once

#include <cstdint>
#include <optional>
#include <set>

#include "localforest/paths.hpp"

namespace lf {

// Smallest number of agreeing trees that still decides a majority vote.
int quorum(int n_estimators);

enum class Technique { association_rules, clustering, random_selection };

struct PipelineConfig {
  bool use_association_rules = true;
  bool use_clustering = true;
  bool use_random = true;
  double min_support = 0.1;
  int max_itemset_size = 3;
  std::optional<int> n_medoids;  // default: ceil(sqrt(|paths|))
  // Extra floor on the retained paths, as a fraction of the initial voting
  // paths. The effective floor is max(quorum, ceil(fraction * K)); raising
  // it stops the trimming stages earlier.
  double min_path_fraction = 0.0;
  std::uint64_t seed = 0;
};

struct ReductionReport {
  int original_feature_count = 0;  // features tested by any voting path
  int reduced_feature_count = 0;
  int original_path_count = 0;  // K, paths that voted the predicted class
  int reduced_path_count = 0;
  double feature_reduction = 0.0;  // (original - reduced) / original
  double path_reduction = 0.0;
  // Techniques that actually changed the retained path set.
  std::set<Technique> techniques_fired;
  int quorum_used = 0;
  // Set when fewer trees voted the winner than the quorum (possible when a
  // tied vote resolves to class 1); the pipeline then keeps all paths.
  bool quorum_degraded = false;
};

struct ReduceResult {
  std::vector<Path> paths;
  ReductionReport report;
};

// Runs the enabled reduction stages in their fixed order (association rules,
// then clustering, then random trimming) and reports how far the voting
// paths and their feature set shrank. The retained paths always number at
// least the quorum, so the forest's vote cannot flip inside the rule their
// intersection describes.
ReduceResult reduce(const Forest& forest, const Instance& instance,
                    const PipelineConfig& config);

}  // namespace lf
