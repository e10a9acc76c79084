#pragma once

// Shared builders for the test suites: tiny hand-made forests with known
// votes and paths, plus random generators for property tests.

#include <string>
#include <vector>

#include "localforest/forest.hpp"
#include "localforest/paths.hpp"
#include "localforest/rng.hpp"

namespace lfh {

inline std::vector<lf::FeatureMeta> numeric_features(int n, double lo = 0.0,
                                                     double hi = 1.0) {
  std::vector<lf::FeatureMeta> features(n);
  for (int i = 0; i < n; ++i) {
    features[i].name = "f" + std::to_string(i + 1);
    features[i].kind = lf::FeatureKind::numeric;
    features[i].global_min = lo;
    features[i].global_max = hi;
  }
  return features;
}

inline lf::TreeNode leaf_node(std::int64_t c0, std::int64_t c1) {
  lf::TreeNode node;
  node.counts = {c0, c1};
  return node;
}

// A single-leaf tree voting the given class.
inline lf::Tree leaf_tree(int vote) {
  lf::Tree tree;
  tree.nodes.push_back(vote == 1 ? leaf_node(0, 1) : leaf_node(1, 0));
  return tree;
}

// n trees, votes1 of which vote class 1, the rest class 0; one feature.
inline lf::Forest vote_forest(int n, int votes1) {
  lf::Forest forest;
  forest.features = numeric_features(1);
  forest.importances = {1.0};
  for (int t = 0; t < n; ++t) forest.trees.push_back(leaf_tree(t < votes1));
  return forest;
}

// A decision chain testing `chain` features in order at threshold 0.5; the
// all-left walk ends in a class-1 leaf, every right turn in a class-0 leaf.
inline lf::Tree chain_tree(const std::vector<int>& chain) {
  lf::Tree tree;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    lf::TreeNode node;
    node.feature = chain[i];
    node.threshold = 0.5;
    node.left = static_cast<int>(tree.nodes.size()) + 1;
    node.right = -1;  // patched below
    tree.nodes.push_back(node);
  }
  tree.nodes.push_back(leaf_node(0, 5));  // all-left leaf
  for (std::size_t i = 0; i < chain.size(); ++i) {
    tree.nodes[i].right = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(leaf_node(5, 0));
  }
  return tree;
}

// Five chain trees over four features whose class-1 paths for an all-0.3
// instance test the feature sets {f1,f2,f4}, {f1,f3,f4}, {f1,f2,f4},
// {f3,f4}, {f4}; all five trees vote class 1, so the quorum is 3.
inline lf::Forest toy_forest() {
  lf::Forest forest;
  forest.features = numeric_features(4);
  forest.importances = {0.25, 0.25, 0.25, 0.25};
  forest.trees.push_back(chain_tree({0, 1, 3}));
  forest.trees.push_back(chain_tree({0, 2, 3}));
  forest.trees.push_back(chain_tree({0, 1, 3}));
  forest.trees.push_back(chain_tree({2, 3}));
  forest.trees.push_back(chain_tree({3}));
  return forest;
}

inline lf::Instance toy_instance() { return {0.3, 0.3, 0.3, 0.3}; }

// A synthetic path with the given per-feature conditions; thresholds only
// matter for bounds tests, not for any tree.
inline lf::Path make_path(int tree_index,
                          const std::vector<lf::Condition>& conditions,
                          int voted_class = 1) {
  lf::Path path;
  path.tree_index = tree_index;
  path.conditions = conditions;
  path.voted_class = voted_class;
  return path;
}

// Random non-contradictory path: each chosen feature gets a lower, an
// upper, or both, with lower < upper, inside the global [0, 1] box.
inline lf::Path random_path(lf::Rng& rng, int n_features, int tree_index = 0) {
  lf::Path path;
  path.tree_index = tree_index;
  path.voted_class = 1;
  for (int f = 0; f < n_features; ++f) {
    const std::uint64_t mode = rng.below(4);  // 0: absent
    if (mode == 0) continue;
    const double a = rng.real01();
    const double b = rng.real01();
    const double lo = std::min(a, b);
    const double hi = std::max(a, b) + 1e-6;
    if (mode == 1 || mode == 3)
      path.conditions.push_back({f, lf::Relation::gt, lo});
    if (mode == 2 || mode == 3)
      path.conditions.push_back({f, lf::Relation::le, hi});
  }
  rng.shuffle(path.conditions);
  return path;
}

// Random tree whose split thresholds stay consistent with the box a walk
// has already carved, so every root-to-leaf path is satisfiable.
inline void grow_random_tree(lf::Tree& tree, lf::Rng& rng, int n_features,
                             std::vector<double>& lo, std::vector<double>& hi,
                             int depth) {
  const int f = static_cast<int>(rng.below(n_features));
  if (depth == 0 || hi[f] - lo[f] < 1e-3 || rng.below(4) == 0) {
    tree.nodes.push_back(leaf_node(rng.below(10), rng.below(10) + 1));
    return;
  }
  lf::TreeNode node;
  node.feature = f;
  node.threshold = lo[f] + (hi[f] - lo[f]) * (0.25 + 0.5 * rng.real01());
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(node);
  const double saved_hi = hi[f];
  hi[f] = node.threshold;
  tree.nodes[index].left = static_cast<int>(tree.nodes.size());
  grow_random_tree(tree, rng, n_features, lo, hi, depth - 1);
  hi[f] = saved_hi;
  const double saved_lo = lo[f];
  lo[f] = node.threshold;
  tree.nodes[index].right = static_cast<int>(tree.nodes.size());
  grow_random_tree(tree, rng, n_features, lo, hi, depth - 1);
  lo[f] = saved_lo;
}

inline lf::Forest random_forest(lf::Rng& rng, int n_trees, int n_features,
                                int depth = 5) {
  lf::Forest forest;
  forest.features = numeric_features(n_features, -1.0, 1.0);
  forest.importances.assign(n_features, 0.0);
  double total = 0.0;
  for (int f = 0; f < n_features; ++f) {
    forest.importances[f] = 0.1 + rng.real01();
    total += forest.importances[f];
  }
  for (int f = 0; f < n_features; ++f) forest.importances[f] /= total;
  for (int t = 0; t < n_trees; ++t) {
    lf::Tree tree;
    std::vector<double> lo(n_features, -1.0);
    std::vector<double> hi(n_features, 1.0);
    grow_random_tree(tree, rng, n_features, lo, hi, depth);
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

inline lf::Instance random_instance(lf::Rng& rng, int n_features,
                                    double lo = -1.0, double hi = 1.0) {
  lf::Instance x(n_features);
  for (int f = 0; f < n_features; ++f) x[f] = lo + (hi - lo) * rng.real01();
  return x;
}

// Separable two-class training set: class = (f1 > 0.5), remaining features
// uniform noise.
inline lf::LabeledDataset separable_dataset(lf::Rng& rng, int rows,
                                            int n_features) {
  lf::LabeledDataset data;
  for (int i = 0; i < rows; ++i) {
    lf::Instance x = random_instance(rng, n_features, 0.0, 1.0);
    data.labels.push_back(x[0] > 0.5 ? 1 : 0);
    data.rows.push_back(std::move(x));
  }
  return data;
}

}  // namespace lfh
