#include "localforest/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "localforest/errors.hpp"
#include "localforest/rng.hpp"

namespace lf {

namespace {

double gini(std::int64_t c0, std::int64_t c1) {
  const double n = static_cast<double>(c0 + c1);
  if (n <= 0.0) return 0.0;
  const double p0 = static_cast<double>(c0) / n;
  const double p1 = static_cast<double>(c1) / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

int max_features_count(const TrainParams& p, int d) {
  switch (p.max_features) {
    case MaxFeaturesStrategy::sqrt_of:
      return std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));
    case MaxFeaturesStrategy::log2_of:
      return std::max(1, static_cast<int>(std::log2(static_cast<double>(d))));
    case MaxFeaturesStrategy::fraction:
      return std::max(1, static_cast<int>(p.max_features_fraction * d));
    case MaxFeaturesStrategy::all:
      return d;
  }
  return d;
}

struct BestSplit {
  int feature = -1;
  double threshold = 0.0;
  double gain = 1e-12;  // minimum improvement a split must beat
};

class TreeBuilder {
 public:
  TreeBuilder(const LabeledDataset& data, const TrainParams& params,
              int n_features, Rng& rng, std::vector<double>& raw_importance)
      : data_(data),
        params_(params),
        n_features_(n_features),
        rng_(rng),
        raw_importance_(raw_importance) {}

  Tree build(std::vector<int> rows) {
    inv_root_n_ = 1.0 / static_cast<double>(rows.size());
    nodes_.clear();
    build_node(rows, 0);
    Tree t;
    t.nodes = std::move(nodes_);
    return t;
  }

 private:
  int make_leaf(std::int64_t c0, std::int64_t c1) {
    TreeNode leaf;
    leaf.counts = {c0, c1};
    nodes_.push_back(leaf);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int build_node(const std::vector<int>& rows, int depth) {
    std::int64_t c0 = 0;
    std::int64_t c1 = 0;
    for (int r : rows) (data_.labels[r] == 0 ? c0 : c1)++;

    const bool depth_capped = params_.max_depth > 0 && depth >= params_.max_depth;
    const auto n = static_cast<std::int64_t>(rows.size());
    if (c0 == 0 || c1 == 0 || depth_capped ||
        n < 2 * params_.min_samples_leaf) {
      return make_leaf(c0, c1);
    }

    const double node_gini = gini(c0, c1);
    const BestSplit best = find_split(rows, c0, c1, node_gini);
    if (best.feature < 0) return make_leaf(c0, c1);

    std::vector<int> left_rows;
    std::vector<int> right_rows;
    left_rows.reserve(rows.size());
    right_rows.reserve(rows.size());
    std::int64_t l0 = 0;
    std::int64_t l1 = 0;
    for (int r : rows) {
      if (data_.rows[r][best.feature] <= best.threshold) {
        left_rows.push_back(r);
        (data_.labels[r] == 0 ? l0 : l1)++;
      } else {
        right_rows.push_back(r);
      }
    }

    const double imp_l = gini(l0, l1);
    const double imp_r = gini(c0 - l0, c1 - l1);
    const auto nl = static_cast<double>(left_rows.size());
    const auto nr = static_cast<double>(right_rows.size());
    raw_importance_[best.feature] +=
        (static_cast<double>(n) * node_gini - nl * imp_l - nr * imp_r) *
        inv_root_n_;

    TreeNode node;
    node.feature = best.feature;
    node.threshold = best.threshold;
    const int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build_node(left_rows, depth + 1);
    nodes_[idx].left = left;
    const int right = build_node(right_rows, depth + 1);
    nodes_[idx].right = right;
    return idx;
  }

  // Examines features in a fresh random order. Counts only features that are
  // non-constant at this node toward the per-split budget, and keeps looking
  // past the budget until at least one valid split has been seen, so a node
  // only becomes a leaf when no feature can split it.
  BestSplit find_split(const std::vector<int>& rows, std::int64_t c0,
                       std::int64_t c1, double node_gini) {
    std::vector<int> order(n_features_);
    std::iota(order.begin(), order.end(), 0);
    rng_.shuffle(order);

    const int budget = max_features_count(params_, n_features_);
    const auto n = static_cast<std::int64_t>(rows.size());
    BestSplit best;
    int examined = 0;

    std::vector<std::pair<double, int>> vals;
    vals.reserve(rows.size());
    for (int f : order) {
      vals.clear();
      for (int r : rows) vals.emplace_back(data_.rows[r][f], data_.labels[r]);
      std::sort(vals.begin(), vals.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (vals.front().first == vals.back().first) continue;  // constant here
      examined++;

      std::int64_t l0 = 0;
      std::int64_t l1 = 0;
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        (vals[i].second == 0 ? l0 : l1)++;
        if (vals[i].first == vals[i + 1].first) continue;
        const auto nl = static_cast<std::int64_t>(i) + 1;
        const auto nr = n - nl;
        if (nl < params_.min_samples_leaf || nr < params_.min_samples_leaf) {
          continue;
        }
        const double weighted =
            (static_cast<double>(nl) * gini(l0, l1) +
             static_cast<double>(nr) * gini(c0 - l0, c1 - l1)) /
            static_cast<double>(n);
        const double gain = node_gini - weighted;
        if (gain > best.gain) {
          double th = (vals[i].first + vals[i + 1].first) / 2.0;
          if (th == vals[i + 1].first) th = vals[i].first;  // midpoint collapse
          best = {f, th, gain};
        }
      }
      if (examined >= budget && best.feature >= 0) break;
    }
    return best;
  }

  const LabeledDataset& data_;
  const TrainParams& params_;
  int n_features_;
  double inv_root_n_ = 1.0;
  Rng& rng_;
  std::vector<double>& raw_importance_;
  std::vector<TreeNode> nodes_;
};

void validate_train_inputs(const LabeledDataset& data,
                           const std::vector<FeatureMeta>& features,
                           const TrainParams& params) {
  if (data.rows.empty()) throw DataError("empty dataset");
  if (data.rows.size() != data.labels.size()) {
    throw DataError("row/label count mismatch");
  }
  const std::size_t width = features.size();
  if (width == 0) throw DataError("dataset has no features");
  for (const auto& row : data.rows) {
    if (row.size() != width) throw DataError("row width does not match features");
  }
  bool seen[2] = {false, false};
  for (int y : data.labels) {
    if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
    seen[y] = true;
  }
  if (!seen[0] || !seen[1]) {
    throw DataError("degenerate labels: only one class present");
  }
  if (params.n_estimators < 1) {
    throw std::invalid_argument("n_estimators must be >= 1");
  }
  if (params.min_samples_leaf < 1) {
    throw std::invalid_argument("min_samples_leaf must be >= 1");
  }
  if (params.max_features == MaxFeaturesStrategy::fraction &&
      !(params.max_features_fraction > 0.0 &&
        params.max_features_fraction <= 1.0)) {
    throw std::invalid_argument("max_features fraction must be in (0, 1]");
  }
}

}  // namespace

Forest train_forest(const LabeledDataset& data,
                    const std::vector<FeatureMeta>& features,
                    const TrainParams& params) {
  validate_train_inputs(data, features, params);

  const int d = static_cast<int>(features.size());
  const auto n = static_cast<std::uint64_t>(data.rows.size());

  Forest forest;
  forest.features = features;
  forest.trees.reserve(params.n_estimators);

  std::vector<double> acc(d, 0.0);
  std::vector<double> raw(d, 0.0);
  for (int t = 0; t < params.n_estimators; ++t) {
    Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(t)));

    std::vector<int> rows(n);
    if (params.bootstrap) {
      for (auto& r : rows) r = static_cast<int>(rng.below(n));
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }

    std::fill(raw.begin(), raw.end(), 0.0);
    TreeBuilder builder(data, params, d, rng, raw);
    forest.trees.push_back(builder.build(std::move(rows)));

    const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
    if (sum > 0.0) {
      for (int f = 0; f < d; ++f) acc[f] += raw[f] / sum;
    }
  }

  const double total = std::accumulate(acc.begin(), acc.end(), 0.0);
  forest.importances.resize(d);
  if (total > 0.0) {
    for (int f = 0; f < d; ++f) forest.importances[f] = acc[f] / total;
  } else {
    // No tree managed a split; fall back to a uniform attribution.
    std::fill(forest.importances.begin(), forest.importances.end(), 1.0 / d);
  }
  return forest;
}

int tree_vote(const Tree& tree, const Instance& instance) {
  const TreeNode* node = &tree.nodes[0];
  while (!node->is_leaf()) {
    node = &tree.nodes[instance[node->feature] <= node->threshold
                           ? node->left
                           : node->right];
  }
  return node->counts[1] >= node->counts[0] ? 1 : 0;
}

Prediction forest_predict(const Forest& forest, const Instance& instance) {
  if (static_cast<int>(instance.size()) != forest.n_features()) {
    throw std::invalid_argument(
        "instance has " + std::to_string(instance.size()) +
        " values, forest expects " + std::to_string(forest.n_features()));
  }
  if (forest.trees.empty()) throw ModelError("forest has no trees");

  int votes1 = 0;
  for (const Tree& t : forest.trees) votes1 += tree_vote(t, instance);

  const int n = forest.n_estimators();
  const int cls = (2 * votes1 >= n) ? 1 : 0;
  return {cls, cls == 1 ? votes1 : n - votes1};
}

}  // namespace lf
