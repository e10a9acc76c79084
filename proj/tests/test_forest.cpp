#include <doctest.h>

#include <cmath>
#include <set>

#include "localforest/errors.hpp"
#include "localforest/forest.hpp"
#include "localforest/forest_json.hpp"
#include "localforest/rng.hpp"

#include "helpers.hpp"

using lf::Forest;
using lf::Instance;
using lf::LabeledDataset;
using lf::TrainParams;

TEST_CASE("majority vote follows the half-of-all-trees convention") {
  // 70 of 100 trees for class 1 -> class 1 with 70 votes.
  lf::Prediction p = lf::forest_predict(lfh::vote_forest(100, 70), {0.0});
  CHECK(p.predicted_class == 1);
  CHECK(p.votes_for_class == 70);

  // 25 of 100 -> class 0 with 75 votes.
  p = lf::forest_predict(lfh::vote_forest(100, 25), {0.0});
  CHECK(p.predicted_class == 0);
  CHECK(p.votes_for_class == 75);

  // Exact tie resolves to class 1.
  p = lf::forest_predict(lfh::vote_forest(100, 50), {0.0});
  CHECK(p.predicted_class == 1);
  CHECK(p.votes_for_class == 50);

  // One short of the tie -> class 0.
  p = lf::forest_predict(lfh::vote_forest(100, 49), {0.0});
  CHECK(p.predicted_class == 0);
  CHECK(p.votes_for_class == 51);
}

TEST_CASE("a tied leaf votes class 1") {
  lf::Tree tree;
  tree.nodes.push_back(lfh::leaf_node(7, 7));
  CHECK(lf::tree_vote(tree, {0.0}) == 1);
}

TEST_CASE("tree routing sends value <= threshold left") {
  lf::Tree tree;
  lf::TreeNode root;
  root.feature = 0;
  root.threshold = 0.5;
  root.left = 1;
  root.right = 2;
  tree.nodes.push_back(root);
  tree.nodes.push_back(lfh::leaf_node(9, 0));  // left: class 0
  tree.nodes.push_back(lfh::leaf_node(0, 9));  // right: class 1
  CHECK(lf::tree_vote(tree, {0.3}) == 0);
  CHECK(lf::tree_vote(tree, {0.5}) == 0);  // boundary goes left
  CHECK(lf::tree_vote(tree, {0.51}) == 1);
}

TEST_CASE("training a cleanly split feature finds the midpoint threshold") {
  LabeledDataset data;
  data.rows = {{1.0}, {2.0}, {3.0}, {4.0}};
  data.labels = {0, 0, 1, 1};
  TrainParams params;
  params.n_estimators = 1;
  params.bootstrap = false;
  params.max_features = lf::MaxFeaturesStrategy::all;
  Forest forest = lf::train_forest(data, lfh::numeric_features(1, 0.0, 5.0),
                                   params);
  REQUIRE(forest.trees.size() == 1);
  const lf::Tree& tree = forest.trees[0];
  REQUIRE(!tree.nodes[0].is_leaf());
  CHECK(tree.nodes[0].feature == 0);
  CHECK(tree.nodes[0].threshold == doctest::Approx(2.5));
  CHECK(tree.nodes[tree.nodes[0].left].is_leaf());
  CHECK(tree.nodes[tree.nodes[0].right].is_leaf());
  CHECK(lf::tree_vote(tree, {1.5}) == 0);
  CHECK(lf::tree_vote(tree, {3.7}) == 1);
}

TEST_CASE("midpoint collapse falls back to the lower value") {
  // 1.0 and the next representable double: the midpoint rounds up to the
  // larger value, which would route both rows the same way; the threshold
  // must drop back to the smaller value.
  const double tiny = std::nextafter(1.0, 2.0);
  LabeledDataset data;
  data.rows = {{1.0}, {tiny}};
  data.labels = {0, 1};
  TrainParams params;
  params.n_estimators = 1;
  params.bootstrap = false;
  Forest forest = lf::train_forest(data, lfh::numeric_features(1, 0.0, 2.0),
                                   params);
  const lf::Tree& tree = forest.trees[0];
  REQUIRE(!tree.nodes[0].is_leaf());
  CHECK(tree.nodes[0].threshold == 1.0);
  CHECK(lf::tree_vote(tree, {1.0}) == 0);
  CHECK(lf::tree_vote(tree, {tiny}) == 1);
}

TEST_CASE("max_depth caps the tree and min_samples_leaf blocks small splits") {
  lf::Rng rng(11);
  LabeledDataset data = lfh::separable_dataset(rng, 200, 3);

  TrainParams params;
  params.n_estimators = 5;
  params.max_depth = 1;
  params.bootstrap = false;
  Forest stumps = lf::train_forest(data, lfh::numeric_features(3), params);
  for (const lf::Tree& tree : stumps.trees) {
    CHECK(tree.nodes.size() <= 3);  // root plus two leaves at most
  }

  params.max_depth = 0;  // unlimited
  params.min_samples_leaf = 60;
  Forest stubby = lf::train_forest(data, lfh::numeric_features(3), params);
  for (const lf::Tree& tree : stubby.trees) {
    for (const lf::TreeNode& node : tree.nodes) {
      if (node.is_leaf()) CHECK(node.counts[0] + node.counts[1] >= 60);
    }
  }
}

TEST_CASE("training is deterministic for a fixed seed") {
  lf::Rng rng(22);
  LabeledDataset data = lfh::separable_dataset(rng, 120, 4);
  TrainParams params;
  params.n_estimators = 20;
  params.seed = 99;
  Forest a = lf::train_forest(data, lfh::numeric_features(4), params);
  Forest b = lf::train_forest(data, lfh::numeric_features(4), params);
  CHECK(lf::serialize_forest(a) == lf::serialize_forest(b));

  params.seed = 100;
  Forest c = lf::train_forest(data, lfh::numeric_features(4), params);
  CHECK(lf::serialize_forest(a) != lf::serialize_forest(c));
}

TEST_CASE("a separable dataset is learned essentially perfectly") {
  lf::Rng rng(33);
  LabeledDataset data = lfh::separable_dataset(rng, 300, 3);
  TrainParams params;
  params.n_estimators = 30;
  params.seed = 5;
  Forest forest = lf::train_forest(data, lfh::numeric_features(3), params);
  int wrong = 0;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    wrong += lf::forest_predict(forest, data.rows[i]).predicted_class
             != data.labels[i];
  }
  CHECK(wrong <= 3);
}

TEST_CASE("importances are a probability vector concentrated on the signal") {
  lf::Rng rng(44);
  LabeledDataset data = lfh::separable_dataset(rng, 200, 4);
  TrainParams params;
  params.n_estimators = 25;
  params.seed = 1;
  Forest forest = lf::train_forest(data, lfh::numeric_features(4), params);
  double sum = 0.0;
  for (double v : forest.importances) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  // The label is a function of f1 alone; it must dominate.
  CHECK(forest.importances[0] > 0.5);
  CHECK(forest.importances[0] > forest.importances[1]);
  CHECK(forest.importances[0] > forest.importances[2]);
  CHECK(forest.importances[0] > forest.importances[3]);
}

TEST_CASE("forests of splitless trees get uniform importances") {
  lf::Rng rng(55);
  LabeledDataset data = lfh::separable_dataset(rng, 50, 4);
  TrainParams params;
  params.n_estimators = 3;
  params.min_samples_leaf = 50;  // no split can satisfy both sides
  Forest forest = lf::train_forest(data, lfh::numeric_features(4), params);
  for (double v : forest.importances) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("degenerate training inputs are rejected") {
  TrainParams params;
  CHECK_THROWS_WITH_AS(
      lf::train_forest(LabeledDataset{}, lfh::numeric_features(1), params),
      "empty dataset", lf::DataError);

  LabeledDataset one_class;
  one_class.rows = {{0.1}, {0.2}};
  one_class.labels = {1, 1};
  CHECK_THROWS_AS(
      lf::train_forest(one_class, lfh::numeric_features(1), params),
      lf::DataError);

  LabeledDataset ok;
  ok.rows = {{0.1}, {0.9}};
  ok.labels = {0, 1};
  TrainParams bad = params;
  bad.n_estimators = 0;
  CHECK_THROWS_AS(lf::train_forest(ok, lfh::numeric_features(1), bad),
                  std::invalid_argument);
  bad = params;
  bad.min_samples_leaf = 0;
  CHECK_THROWS_AS(lf::train_forest(ok, lfh::numeric_features(1), bad),
                  std::invalid_argument);
  bad = params;
  bad.max_features = lf::MaxFeaturesStrategy::fraction;
  bad.max_features_fraction = 0.0;
  CHECK_THROWS_AS(lf::train_forest(ok, lfh::numeric_features(1), bad),
                  std::invalid_argument);
}

TEST_CASE("bootstrap resampling changes trees, disabling it aligns them") {
  lf::Rng rng(66);
  LabeledDataset data = lfh::separable_dataset(rng, 150, 3);
  TrainParams params;
  params.n_estimators = 8;
  params.max_features = lf::MaxFeaturesStrategy::all;
  params.seed = 3;

  params.bootstrap = false;
  Forest plain = lf::train_forest(data, lfh::numeric_features(3), params);
  // Identical rows + full feature budget: every tree sees the same data,
  // so all trees are structurally identical.
  std::set<std::string> shapes;
  for (const lf::Tree& tree : plain.trees) {
    std::string shape;
    for (const lf::TreeNode& node : tree.nodes) {
      shape += std::to_string(node.feature) + ":"
               + std::to_string(node.threshold) + ";";
    }
    shapes.insert(shape);
  }
  CHECK(shapes.size() == 1);

  params.bootstrap = true;
  Forest bagged = lf::train_forest(data, lfh::numeric_features(3), params);
  shapes.clear();
  for (const lf::Tree& tree : bagged.trees) {
    std::string shape;
    for (const lf::TreeNode& node : tree.nodes) {
      shape += std::to_string(node.feature) + ":"
               + std::to_string(node.threshold) + ";";
    }
    shapes.insert(shape);
  }
  CHECK(shapes.size() > 1);
}
