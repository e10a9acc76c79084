#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lf {

enum class FeatureKind { numeric, onehot_member, ordinal };

// One axis of the encoded feature space. A one-hot member keeps its raw
// {0, 1} axis and remembers the categorical group it belongs to and the
// category it asserts; an ordinal feature carries the ordered category list
// its integer codes index into. global_min/global_max are the bounds of the
// axis after any scaling has been applied.
struct FeatureMeta {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::string group;                    // onehot_member only
  std::string category;                 // onehot_member only
  std::vector<std::string> categories;  // ordinal only
  double global_min = 0.0;
  double global_max = 1.0;
};

// Node of a decision tree, stored flat. Internal nodes route value <=
// threshold to the left child; leaves hold the training class counts.
struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<std::int64_t, 2> counts{0, 0};

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at index 0, never empty
};

struct Forest {
  std::vector<Tree> trees;
  std::vector<FeatureMeta> features;
  std::vector<double> importances;  // non-negative, sums to 1

  int n_estimators() const { return static_cast<int>(trees.size()); }
  int n_features() const { return static_cast<int>(features.size()); }
};

using Instance = std::vector<double>;

enum class MaxFeaturesStrategy { sqrt_of, log2_of, fraction, all };

struct TrainParams {
  int n_estimators = 100;
  int max_depth = 10;  // <= 0 means unlimited
  MaxFeaturesStrategy max_features = MaxFeaturesStrategy::sqrt_of;
  double max_features_fraction = 1.0;  // used when max_features == fraction
  int min_samples_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct LabeledDataset {
  std::vector<Instance> rows;
  std::vector<int> labels;  // 0 or 1
};

// Trains a bagged forest of CART trees (Gini impurity, per-split feature
// subsampling). Deterministic for a fixed seed. Throws DataError on an empty
// dataset or when only one class is present, std::invalid_argument on bad
// parameters.
Forest train_forest(const LabeledDataset& data,
                    const std::vector<FeatureMeta>& features,
                    const TrainParams& params);

// Routes the instance to a leaf and returns the majority class there.
// A tied leaf votes class 1.
int tree_vote(const Tree& tree, const Instance& instance);

struct Prediction {
  int predicted_class = 0;
  int votes_for_class = 0;  // trees that voted predicted_class
};

// Majority vote over all trees: class 1 wins iff at least half the trees
// vote for it (exact ties go to class 1).
Prediction forest_predict(const Forest& forest, const Instance& instance);

}  // namespace lf
