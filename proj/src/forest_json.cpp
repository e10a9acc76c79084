#include "localforest/forest_json.hpp"

#include <cmath>
#include <cstdint>
#include <set>

#include <json.hpp>

#include "localforest/errors.hpp"

namespace lf {

namespace {

using nlohmann::json;

const char* kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::numeric: return "numeric";
    case FeatureKind::onehot_member: return "onehot_member";
    case FeatureKind::ordinal: return "ordinal";
  }
  return "numeric";
}

json feature_to_json(const FeatureMeta& m) {
  json j;
  j["name"] = m.name;
  j["kind"] = kind_name(m.kind);
  j["min"] = m.global_min;
  j["max"] = m.global_max;
  if (m.kind == FeatureKind::onehot_member) {
    j["group"] = m.group;
    j["categories"] = json::array({m.category});
  } else if (m.kind == FeatureKind::ordinal) {
    j["categories"] = m.categories;
  }
  return j;
}

json node_to_json(const Tree& tree, int index) {
  const TreeNode& n = tree.nodes[index];
  json j;
  if (n.is_leaf()) {
    j["leaf"] = json::array({n.counts[0], n.counts[1]});
  } else {
    j["feature"] = n.feature;
    j["threshold"] = n.threshold;
    j["left"] = node_to_json(tree, n.left);
    j["right"] = node_to_json(tree, n.right);
  }
  return j;
}

const json& require_field(const json& j, const char* key,
                          const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(path, std::string("missing \"") + key + "\"");
  }
  return *it;
}

double require_number(const json& j, const char* key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_number()) {
    throw ParseError(path, std::string("\"") + key + "\" must be a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw ParseError(path, std::string("\"") + key + "\" must be finite");
  }
  return x;
}

std::string require_string(const json& j, const char* key,
                           const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_string()) {
    throw ParseError(path, std::string("\"") + key + "\" must be a string");
  }
  return v.get<std::string>();
}

FeatureMeta parse_feature(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "feature must be an object");
  FeatureMeta m;
  m.name = require_string(j, "name", path);
  const std::string kind = require_string(j, "kind", path);
  m.global_min = require_number(j, "min", path);
  m.global_max = require_number(j, "max", path);
  if (!(m.global_min < m.global_max)) {
    throw ParseError(path, "\"min\" must be below \"max\"");
  }

  if (kind == "numeric") {
    m.kind = FeatureKind::numeric;
  } else if (kind == "onehot_member") {
    m.kind = FeatureKind::onehot_member;
    m.group = require_string(j, "group", path);
    const json& cats = require_field(j, "categories", path);
    if (!cats.is_array() || cats.size() != 1 || !cats[0].is_string()) {
      throw ParseError(path,
                       "\"categories\" of a one-hot member must hold exactly "
                       "its asserted category");
    }
    m.category = cats[0].get<std::string>();
  } else if (kind == "ordinal") {
    m.kind = FeatureKind::ordinal;
    const json& cats = require_field(j, "categories", path);
    if (!cats.is_array() || cats.empty()) {
      throw ParseError(path, "\"categories\" must be a non-empty array");
    }
    std::set<std::string> seen;
    for (const auto& c : cats) {
      if (!c.is_string()) {
        throw ParseError(path, "\"categories\" entries must be strings");
      }
      if (!seen.insert(c.get<std::string>()).second) {
        throw ParseError(path, "duplicate category \"" + c.get<std::string>() +
                                   "\"");
      }
      m.categories.push_back(c.get<std::string>());
    }
  } else {
    throw ParseError(path, "unknown kind \"" + kind + "\"");
  }
  return m;
}

int parse_node(const json& j, const std::string& path, int n_features,
               Tree& tree) {
  if (!j.is_object()) throw ParseError(path, "node must be an object");

  const bool has_leaf = j.contains("leaf");
  const bool has_split = j.contains("feature") || j.contains("threshold") ||
                         j.contains("left") || j.contains("right");
  if (has_leaf && has_split) {
    throw ParseError(path, "node mixes \"leaf\" with split fields");
  }

  if (has_leaf) {
    const json& leaf = j["leaf"];
    if (!leaf.is_array() || leaf.size() != 2 ||
        !leaf[0].is_number_integer() || !leaf[1].is_number_integer()) {
      throw ParseError(path, "\"leaf\" must be an array of two integers");
    }
    const auto c0 = leaf[0].get<std::int64_t>();
    const auto c1 = leaf[1].get<std::int64_t>();
    if (c0 < 0 || c1 < 0) {
      throw ParseError(path, "leaf counts must be non-negative");
    }
    if (c0 == 0 && c1 == 0) {
      throw ParseError(path, "leaf counts must not both be zero");
    }
    TreeNode node;
    node.counts = {c0, c1};
    tree.nodes.push_back(node);
    return static_cast<int>(tree.nodes.size()) - 1;
  }

  const json& fv = require_field(j, "feature", path);
  if (!fv.is_number_integer()) {
    throw ParseError(path, "\"feature\" must be an integer");
  }
  const auto feature = fv.get<std::int64_t>();
  if (feature < 0 || feature >= n_features) {
    throw ParseError(path, "\"feature\" index " + std::to_string(feature) +
                               " out of range");
  }
  const double threshold = require_number(j, "threshold", path);

  TreeNode node;
  node.feature = static_cast<std::int32_t>(feature);
  node.threshold = threshold;
  const int idx = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(node);
  const int left =
      parse_node(require_field(j, "left", path), path + ".left", n_features,
                 tree);
  tree.nodes[idx].left = left;
  const int right =
      parse_node(require_field(j, "right", path), path + ".right", n_features,
                 tree);
  tree.nodes[idx].right = right;
  return idx;
}

}  // namespace

std::string serialize_forest(const Forest& forest) {
  json doc;
  doc["n_estimators"] = forest.n_estimators();

  json features = json::array();
  for (const auto& m : forest.features) features.push_back(feature_to_json(m));
  doc["features"] = std::move(features);

  doc["importances"] = forest.importances;

  json trees = json::array();
  for (const auto& t : forest.trees) trees.push_back(node_to_json(t, 0));
  doc["trees"] = std::move(trees);

  return doc.dump();
}

Forest deserialize_forest(const std::string& bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("", "document must be an object");

  Forest forest;

  const json& features = require_field(doc, "features", "");
  if (!features.is_array() || features.empty()) {
    throw ParseError("features", "must be a non-empty array");
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    forest.features.push_back(
        parse_feature(features[i], "features[" + std::to_string(i) + "]"));
  }
  const int d = forest.n_features();

  const json& importances = require_field(doc, "importances", "");
  if (!importances.is_array() ||
      static_cast<int>(importances.size()) != d) {
    throw ParseError("importances", "must be an array of one value per feature");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < importances.size(); ++i) {
    const std::string path = "importances[" + std::to_string(i) + "]";
    if (!importances[i].is_number()) throw ParseError(path, "must be a number");
    const double v = importances[i].get<double>();
    if (!std::isfinite(v) || v < 0.0) {
      throw ParseError(path, "must be a non-negative number");
    }
    forest.importances.push_back(v);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ParseError("importances", "must sum to 1");
  }

  const json& trees = require_field(doc, "trees", "");
  if (!trees.is_array() || trees.empty()) {
    throw ParseError("trees", "must be a non-empty array");
  }
  for (std::size_t i = 0; i < trees.size(); ++i) {
    Tree t;
    parse_node(trees[i], "trees[" + std::to_string(i) + "]", d, t);
    forest.trees.push_back(std::move(t));
  }

  const json& nv = require_field(doc, "n_estimators", "");
  if (!nv.is_number_integer()) {
    throw ParseError("n_estimators", "must be an integer");
  }
  if (nv.get<std::int64_t>() != static_cast<std::int64_t>(trees.size())) {
    throw ParseError("n_estimators", "does not match the number of trees");
  }

  return forest;
}

}  // namespace lf
