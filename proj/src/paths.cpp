#include "localforest/paths.hpp"

#include <stdexcept>
#include <string>

#include "localforest/errors.hpp"

namespace lf {

namespace {

void check_feature_index(int feature, const std::vector<FeatureMeta>& features) {
  if (feature < 0 || feature >= static_cast<int>(features.size())) {
    throw std::invalid_argument("condition references feature index " +
                                std::to_string(feature) +
                                " outside the feature space");
  }
}

void apply_condition(FeatureRange& range, const Condition& cond) {
  if (cond.relation == Relation::gt) {
    if (cond.threshold >= range.lower) {
      range.lower = cond.threshold;
      range.lower_strict = true;
    }
  } else {
    if (cond.threshold < range.upper) range.upper = cond.threshold;
  }
}

void merge_range(FeatureRange& into, const FeatureRange& other) {
  if (other.lower > into.lower) {
    into.lower = other.lower;
    into.lower_strict = other.lower_strict;
  } else if (other.lower == into.lower) {
    into.lower_strict = into.lower_strict || other.lower_strict;
  }
  if (other.upper < into.upper) into.upper = other.upper;
}

}  // namespace

bool range_contains(const FeatureRange& range, double value) {
  const bool above =
      range.lower_strict ? value > range.lower : value >= range.lower;
  return above && value <= range.upper;
}

std::vector<Path> extract_paths(const Forest& forest, const Instance& instance) {
  const Prediction pred = forest_predict(forest, instance);

  std::vector<Path> paths;
  paths.reserve(forest.trees.size());
  for (int t = 0; t < forest.n_estimators(); ++t) {
    const Tree& tree = forest.trees[t];
    Path path;
    path.tree_index = t;
    const TreeNode* node = &tree.nodes[0];
    while (!node->is_leaf()) {
      const bool goes_left = instance[node->feature] <= node->threshold;
      path.conditions.push_back({node->feature,
                                 goes_left ? Relation::le : Relation::gt,
                                 node->threshold});
      node = &tree.nodes[goes_left ? node->left : node->right];
    }
    path.voted_class = node->counts[1] >= node->counts[0] ? 1 : 0;
    if (path.voted_class == pred.predicted_class) paths.push_back(std::move(path));
  }
  return paths;
}

std::map<int, FeatureRange> path_feature_bounds(
    const Path& path, const std::vector<FeatureMeta>& features) {
  std::map<int, FeatureRange> bounds;
  for (const Condition& cond : path.conditions) {
    check_feature_index(cond.feature, features);
    const FeatureMeta& meta = features[cond.feature];
    auto [it, inserted] = bounds.try_emplace(
        cond.feature, FeatureRange{cond.feature, meta.global_min,
                                   meta.global_max, false});
    apply_condition(it->second, cond);
  }
  for (const auto& [feature, range] : bounds) {
    if (!(range.lower < range.upper)) {
      throw std::runtime_error("inconsistent path: feature '" +
                               features[feature].name + "' has empty range");
    }
  }
  return bounds;
}

std::vector<FeatureRange> intersect_ranges(
    const std::vector<Path>& paths, const std::vector<FeatureMeta>& features) {
  if (paths.empty()) {
    throw std::invalid_argument("cannot intersect an empty path set");
  }

  std::map<int, FeatureRange> acc;
  for (const Path& path : paths) {
    for (const auto& [feature, range] : path_feature_bounds(path, features)) {
      auto [it, inserted] = acc.try_emplace(feature, range);
      if (!inserted) merge_range(it->second, range);
    }
  }

  std::vector<FeatureRange> result;
  result.reserve(acc.size());
  for (const auto& [feature, range] : acc) {
    if (!(range.lower < range.upper)) {
      throw std::runtime_error("inconsistent path set: feature '" +
                               features[feature].name +
                               "' has empty intersection");
    }
    result.push_back(range);
  }
  return result;
}

}  // namespace lf
