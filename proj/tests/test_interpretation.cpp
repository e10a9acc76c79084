#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "localforest/interpret.hpp"

#include "helpers.hpp"

using lf::Alternatives;
using lf::ClauseKind;
using lf::FeatureRange;
using lf::Rule;
using lf::RuleClause;

namespace {

// Identity scaler: every feature passes through unscaled.
lf::ScalerState identity_scaler(int n) {
  lf::ScalerState scaler;
  scaler.features.assign(n, lf::FeatureScale{false, 0.0, 1.0});
  return scaler;
}

RuleClause numeric_clause(const std::string& name, double lower, double upper) {
  RuleClause c;
  c.feature_name = name;
  c.kind = ClauseKind::numeric_range;
  c.lower = lower;
  c.upper = upper;
  return c;
}

// Three-member one-hot group "color" plus a numeric "size" axis.
lf::Forest color_forest() {
  lf::Forest forest;
  forest.features.resize(4);
  const char* names[] = {"red", "green", "blue"};
  for (int f = 0; f < 3; ++f) {
    forest.features[f].name = std::string("color_") + names[f];
    forest.features[f].kind = lf::FeatureKind::onehot_member;
    forest.features[f].group = "color";
    forest.features[f].category = names[f];
    forest.features[f].global_min = 0.0;
    forest.features[f].global_max = 1.0;
  }
  forest.features[3].name = "size";
  forest.features[3].global_min = -1.0;
  forest.features[3].global_max = 1.0;
  forest.importances = {0.1, 0.15, 0.25, 0.5};
  forest.trees.push_back(lfh::leaf_tree(1));
  forest.trees.push_back(lfh::leaf_tree(0));
  return forest;
}

}  // namespace

TEST_CASE("numeric bounds render with two trimmed decimals") {
  Rule rule;
  rule.predicted_class_label = "yes";
  rule.clauses.push_back(numeric_clause("f1", 0.469, 0.6));
  CHECK(lf::render_rule_text(rule) == "if 0.47 ≤ f1 ≤ 0.6 then yes");

  rule.clauses[0] = numeric_clause("variance", 2.4, 6.83);
  CHECK(lf::render_rule_text(rule)
        == "if 2.4 ≤ variance ≤ 6.83 then yes");

  rule.clauses[0] = numeric_clause("x", -0.001, 17.93);
  CHECK(lf::render_rule_text(rule) == "if 0 ≤ x ≤ 17.93 then yes");

  rule.clauses[0] = numeric_clause("x", -1.599, 3.0);
  CHECK(lf::render_rule_text(rule) == "if -1.6 ≤ x ≤ 3 then yes");
}

TEST_CASE("multi-clause rules join with and; empty rules say so") {
  Rule rule;
  rule.predicted_class_label = "fake banknote";
  rule.clauses.push_back(numeric_clause("variance", 2.4, 6.83));
  rule.clauses.push_back(numeric_clause("curtosis", -1.6, 17.93));
  CHECK(lf::render_rule_text(rule)
        == "if 2.4 ≤ variance ≤ 6.83 and -1.6 ≤ curtosis ≤ 17.93 "
           "then fake banknote");

  Rule empty;
  empty.predicted_class_label = "whatever";
  CHECK(lf::render_rule_text(empty)
        == "if [no feature-ranges] then whatever");
}

TEST_CASE("one-hot members split into asserted, may-affect and preserved") {
  const lf::Forest forest = color_forest();
  const std::vector<FeatureRange> ranges = {
      {0, 0.5, 1.0, true},   // red pinned active
      {1, 0.0, 0.5, false},  // green survived, compatible with zero
      {3, -0.2, 0.8, true},
  };
  const std::set<int> reduced = {0, 1, 3};

  const Alternatives alt = lf::map_onehot(forest, "color", ranges, reduced);
  REQUIRE(alt.asserted.has_value());
  CHECK(*alt.asserted == "red");
  CHECK(alt.may_affect == std::vector<std::string>{"green"});
  CHECK(alt.preserves == std::vector<std::string>{"blue"});

  CHECK_THROWS_AS(lf::map_onehot(forest, "flavor", ranges, reduced),
                  std::invalid_argument);

  const std::vector<FeatureRange> doubled = {
      {0, 0.5, 1.0, true}, {1, 0.6, 1.0, true}};
  CHECK_THROWS_WITH_AS(
      lf::map_onehot(forest, "color", doubled, {0, 1}),
      "inconsistent one-hot group 'color': members 'red' and 'green' "
      "both asserted",
      std::runtime_error);
}

TEST_CASE("an unasserted surviving group yields alternatives but no clause") {
  const lf::Forest forest = color_forest();
  const std::vector<FeatureRange> ranges = {
      {1, 0.0, 0.5, false},  // green bounded away from one
      {3, -0.2, 0.8, true},
  };
  const Rule rule = lf::compose_rule(ranges, forest, {1, 3},
                                     identity_scaler(4), "L");
  REQUIRE(rule.clauses.size() == 1);
  CHECK(rule.clauses[0].feature_name == "size");
  const Alternatives& alt = rule.alternatives.at("color");
  CHECK(!alt.asserted.has_value());
  CHECK(alt.may_affect == std::vector<std::string>{"green"});
  CHECK(alt.preserves == std::vector<std::string>{"red", "blue"});

  const nlohmann::json doc = lf::rule_to_json(rule);
  CHECK(doc["alternatives"]["color"]["value"].is_null());
}

TEST_CASE("ordinal code ranges map to the covered categories") {
  lf::FeatureMeta meta;
  meta.name = "grade";
  meta.kind = lf::FeatureKind::ordinal;
  meta.categories = {"low", "mid", "high", "top"};

  CHECK(lf::map_ordinal({0, 0.6, 2.4, false}, meta)
        == std::vector<std::string>{"mid", "high"});
  CHECK(lf::map_ordinal({0, -3.0, 9.0, false}, meta)
        == std::vector<std::string>{"low", "mid", "high", "top"});
  CHECK(lf::map_ordinal({0, 0.5, 1.49, false}, meta)
        == std::vector<std::string>{"mid"});
  CHECK(lf::map_ordinal({0, 2.8, 2.9, false}, meta)
        == std::vector<std::string>{"top"});

  // Both ends round to a gap above the last code.
  lf::FeatureMeta three = meta;
  three.categories = {"a", "b", "c"};
  CHECK_THROWS_AS(lf::map_ordinal({0, 2.6, 2.7, false}, three),
                  std::runtime_error);

  lf::FeatureMeta numeric;
  numeric.name = "x";
  CHECK_THROWS_AS(lf::map_ordinal({0, 0.0, 1.0, false}, numeric),
                  std::invalid_argument);
}

TEST_CASE("composed rules order clauses by importance, ties by index") {
  const lf::Forest forest = color_forest();
  const std::vector<FeatureRange> ranges = {
      {0, 0.5, 1.0, true},
      {3, -0.2, 0.8, true},
  };
  const Rule rule = lf::compose_rule(ranges, forest, {0, 3},
                                     identity_scaler(4), "L");
  REQUIRE(rule.clauses.size() == 2);
  CHECK(rule.clauses[0].feature_name == "size");   // importance 0.5
  CHECK(rule.clauses[1].feature_name == "color");  // importance 0.1
  CHECK(rule.clauses[1].category == "red");
  CHECK(lf::render_rule_text(rule)
        == "if -0.2 ≤ size ≤ 0.8 and color^c = red then L");

  lf::Forest tied = forest;
  tied.importances = {0.25, 0.25, 0.25, 0.25};
  const Rule tie_rule = lf::compose_rule(ranges, tied, {0, 3},
                                         identity_scaler(4), "L");
  CHECK(tie_rule.clauses[0].feature_name == "color");  // lower feature index
  CHECK(tie_rule.clauses[1].feature_name == "size");
}

TEST_CASE("numeric clauses convert back to original units") {
  lf::Forest forest;
  forest.features = lfh::numeric_features(1, -1.0, 1.0);
  forest.features[0].name = "weight";
  forest.importances = {1.0};
  forest.trees.push_back(lfh::leaf_tree(1));
  forest.trees.push_back(lfh::leaf_tree(0));

  lf::ScalerState scaler;
  scaler.features = {lf::FeatureScale{true, 0.0, 10.0}};  // [0,10] <-> [-1,1]

  const std::vector<FeatureRange> ranges = {{0, -0.5, 0.5, true}};
  const Rule rule = lf::compose_rule(ranges, forest, {0}, scaler, "L");
  REQUIRE(rule.clauses.size() == 1);
  CHECK(rule.clauses[0].lower == doctest::Approx(2.5));
  CHECK(rule.clauses[0].upper == doctest::Approx(7.5));
  CHECK(rule.clauses[0].lower_strict);
  CHECK(lf::render_rule_text(rule) == "if 2.5 ≤ weight ≤ 7.5 then L");
}

TEST_CASE("ordinal features pass through the scaler before code lookup") {
  lf::Forest forest;
  forest.features = lfh::numeric_features(1, -1.0, 1.0);
  forest.features[0].name = "grade";
  forest.features[0].kind = lf::FeatureKind::ordinal;
  forest.features[0].categories = {"low", "mid", "high"};
  forest.importances = {1.0};
  forest.trees.push_back(lfh::leaf_tree(1));
  forest.trees.push_back(lfh::leaf_tree(0));

  lf::ScalerState scaler;
  scaler.features = {lf::FeatureScale{true, 0.0, 2.0}};  // codes 0..2

  // Internal (-1, 0] -> codes (0, 1] -> categories low..mid after rounding.
  const std::vector<FeatureRange> ranges = {{0, -1.0, 0.0, false}};
  const Rule rule = lf::compose_rule(ranges, forest, {0}, scaler, "L");
  REQUIRE(rule.clauses.size() == 1);
  CHECK(rule.clauses[0].kind == ClauseKind::ordinal_set);
  CHECK(rule.clauses[0].categories
        == std::vector<std::string>{"low", "mid"});
  CHECK(lf::render_rule_text(rule) == "if grade^c = [low, mid] then L");

  const std::vector<FeatureRange> narrow = {{0, -0.2, 0.2, false}};
  const Rule single = lf::compose_rule(narrow, forest, {0}, scaler, "L");
  CHECK(single.clauses[0].categories == std::vector<std::string>{"mid"});
  CHECK(lf::render_rule_text(single) == "if grade^c = mid then L");
}

TEST_CASE("hiding folds the least important tail into a counter") {
  lf::Forest forest;
  forest.features = lfh::numeric_features(4);
  forest.importances = {0.4, 0.3, 0.2, 0.1};
  forest.trees.push_back(lfh::leaf_tree(1));
  forest.trees.push_back(lfh::leaf_tree(0));

  const std::vector<FeatureRange> ranges = {
      {0, 0.1, 0.9, true}, {1, 0.1, 0.9, true},
      {2, 0.1, 0.9, true}, {3, 0.1, 0.9, true}};
  const Rule rule = lf::compose_rule(ranges, forest, {0, 1, 2, 3},
                                     identity_scaler(4), "L", 2);
  REQUIRE(rule.clauses.size() == 4);
  CHECK(!rule.clauses[0].hidden);
  CHECK(!rule.clauses[1].hidden);
  CHECK(rule.clauses[2].hidden);
  CHECK(rule.clauses[3].hidden);
  CHECK(lf::render_rule_text(rule)
        == "if 0.1 ≤ f1 ≤ 0.9 and 0.1 ≤ f2 ≤ 0.9 and "
           "[other 2 feature-ranges] then L");

  // Hidden clauses keep their data in the machine form.
  const nlohmann::json doc = lf::rule_to_json(rule);
  CHECK(doc["clauses"].size() == 4);
  CHECK(doc["clauses"][3]["hidden"] == true);
  CHECK(doc["clauses"][3]["lower"] == 0.1);

  CHECK_THROWS_AS(lf::compose_rule(ranges, forest, {0, 1, 2, 3},
                                   identity_scaler(4), "L", 4),
                  std::invalid_argument);
  CHECK_NOTHROW(lf::compose_rule(ranges, forest, {0, 1, 2, 3},
                                 identity_scaler(4), "L", 3));
}

TEST_CASE("rule json carries full precision bounds and openness") {
  const lf::Forest forest = color_forest();
  const std::vector<FeatureRange> ranges = {
      {0, 0.5, 1.0, true},
      {3, -0.123456789012345, 0.8, true},
  };
  const Rule rule = lf::compose_rule(ranges, forest, {0, 3},
                                     identity_scaler(4), "L");
  const nlohmann::json doc = lf::rule_to_json(rule);
  CHECK(doc["class"] == "L");
  CHECK(doc["clauses"][0]["kind"] == "numeric_range");
  CHECK(doc["clauses"][0]["lower"].get<double>() == -0.123456789012345);
  CHECK(doc["clauses"][0]["lower_open"] == true);
  CHECK(doc["clauses"][0]["upper_open"] == false);
  CHECK(doc["clauses"][1]["kind"] == "categorical_equals");
  CHECK(doc["clauses"][1]["category"] == "red");
  CHECK(doc["alternatives"]["color"]["value"] == "red");
  CHECK(doc["alternatives"]["color"]["may_affect"].empty());
  CHECK(doc["alternatives"]["color"]["preserves"]
        == nlohmann::json({"green", "blue"}));
}

TEST_CASE("the category partition always covers the whole vocabulary") {
  lf::Rng rng(51);
  const lf::Forest forest = color_forest();
  for (int round = 0; round < 200; ++round) {
    std::vector<FeatureRange> ranges;
    std::set<int> reduced;
    for (int f = 0; f < 3; ++f) {
      if (rng.below(2) == 0) continue;
      reduced.insert(f);
      if (ranges.empty() && rng.below(2) == 0) {
        ranges.push_back({f, 0.5, 1.0, true});  // at most one asserted
      } else {
        ranges.push_back({f, 0.0, 0.5, false});
      }
    }
    const Alternatives alt = lf::map_onehot(forest, "color", ranges, reduced);
    std::set<std::string> all;
    int total = 0;
    if (alt.asserted) {
      all.insert(*alt.asserted);
      total += 1;
    }
    all.insert(alt.may_affect.begin(), alt.may_affect.end());
    all.insert(alt.preserves.begin(), alt.preserves.end());
    total += static_cast<int>(alt.may_affect.size() + alt.preserves.size());
    CHECK(total == 3);  // pairwise disjoint …
    CHECK(all == std::set<std::string>{"red", "green", "blue"});  // … and full
  }
}
