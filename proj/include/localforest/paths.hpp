#pragma once

#include <map>
#include <vector>

#include "localforest/forest.hpp"

namespace lf {

enum class Relation { le, gt };

// One comparison on a root-to-leaf walk: feature <= threshold or
// feature > threshold.
struct Condition {
  int feature = 0;
  Relation relation = Relation::le;
  double threshold = 0.0;
};

struct Path {
  int tree_index = 0;
  std::vector<Condition> conditions;  // in traversal order
  int voted_class = 0;
};

// Interval of admissible values for one feature. The upper end is always
// inclusive. The lower end is exclusive when it comes from a "> threshold"
// condition (lower_strict) and inclusive when it is just the feature's
// global minimum, so values sitting exactly on the global bound stay inside.
struct FeatureRange {
  int feature = 0;
  double lower = 0.0;
  double upper = 0.0;
  bool lower_strict = false;
};

bool range_contains(const FeatureRange& range, double value);

// Collects the decision paths of every tree that voted the forest's
// predicted class, one path per such tree, conditions in traversal order.
std::vector<Path> extract_paths(const Forest& forest, const Instance& instance);

// Folds a path's conditions into one interval per mentioned feature: the
// lower end is the maximum "> t" threshold (global minimum when absent), the
// upper end the minimum "<= t" threshold (global maximum when absent).
// Throws std::runtime_error when some feature's interval is empty, which
// cannot happen for a path produced by a real traversal.
std::map<int, FeatureRange> path_feature_bounds(
    const Path& path, const std::vector<FeatureMeta>& features);

// Intersects the per-feature bounds of several paths. Only features that
// appear in at least one path are returned, ordered by feature index.
// Throws std::runtime_error when the intersection is empty for some feature,
// which cannot happen when all paths come from one instance's traversals.
std::vector<FeatureRange> intersect_ranges(
    const std::vector<Path>& paths, const std::vector<FeatureMeta>& features);

}  // namespace lf
