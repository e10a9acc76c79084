#include "localforest/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lf {

namespace {

std::map<int, const FeatureRange*> index_ranges(
    const std::vector<FeatureRange>& ranges) {
  std::map<int, const FeatureRange*> by_feature;
  for (const FeatureRange& r : ranges) by_feature[r.feature] = &r;
  return by_feature;
}

std::string format_bound(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

}  // namespace

Alternatives map_onehot(const Forest& forest, const std::string& group,
                        const std::vector<FeatureRange>& ranges,
                        const std::set<int>& reduced_features) {
  const auto by_feature = index_ranges(ranges);

  Alternatives out;
  bool group_seen = false;
  for (int f = 0; f < forest.n_features(); ++f) {
    const FeatureMeta& meta = forest.features[f];
    if (meta.kind != FeatureKind::onehot_member || meta.group != group) continue;
    group_seen = true;

    if (!reduced_features.count(f)) {
      out.preserves.push_back(meta.category);
      continue;
    }
    const auto it = by_feature.find(f);
    if (it != by_feature.end() && it->second->lower >= 0.5) {
      if (out.asserted) {
        throw std::runtime_error("inconsistent one-hot group '" + group +
                                 "': members '" + *out.asserted + "' and '" +
                                 meta.category + "' both asserted");
      }
      out.asserted = meta.category;
    } else {
      // Survived reduction but pinned to (or at least compatible with) zero.
      out.may_affect.push_back(meta.category);
    }
  }
  if (!group_seen) {
    throw std::invalid_argument("forest has no one-hot group '" + group + "'");
  }
  return out;
}

std::vector<std::string> map_ordinal(const FeatureRange& code_range,
                                     const FeatureMeta& meta) {
  if (meta.kind != FeatureKind::ordinal) {
    throw std::invalid_argument("feature '" + meta.name + "' is not ordinal");
  }
  const auto n_codes = static_cast<long>(meta.categories.size());
  long lo = std::lround(code_range.lower);
  long hi = std::lround(code_range.upper);
  lo = std::max(lo, 0L);
  hi = std::min(hi, n_codes - 1);
  if (lo > hi) {
    throw std::runtime_error("range of ordinal feature '" + meta.name +
                             "' covers no category");
  }
  return {meta.categories.begin() + lo, meta.categories.begin() + hi + 1};
}

Rule compose_rule(const std::vector<FeatureRange>& ranges, const Forest& forest,
                  const std::set<int>& reduced_features,
                  const ScalerState& scaler, const std::string& class_label,
                  int hide_last_n) {
  if (hide_last_n < 0) throw std::invalid_argument("hide_last_n must be >= 0");
  if (scaler.features.size() != forest.features.size()) {
    throw std::invalid_argument("scaler does not match the feature space");
  }

  Rule rule;
  rule.predicted_class_label = class_label;

  struct Pending {
    RuleClause clause;
    int sort_feature;  // ties in importance break by feature index
  };
  std::vector<Pending> pending;

  std::set<std::string> groups_done;
  for (const FeatureRange& r : ranges) {
    const FeatureMeta& meta = forest.features[r.feature];
    switch (meta.kind) {
      case FeatureKind::onehot_member: {
        if (!groups_done.insert(meta.group).second) break;
        Alternatives alt =
            map_onehot(forest, meta.group, ranges, reduced_features);
        if (alt.asserted) {
          RuleClause clause;
          clause.feature_name = meta.group;
          clause.kind = ClauseKind::categorical_equals;
          clause.category = *alt.asserted;
          int member = -1;
          for (int f = 0; f < forest.n_features(); ++f) {
            const FeatureMeta& m = forest.features[f];
            if (m.kind == FeatureKind::onehot_member && m.group == meta.group &&
                m.category == *alt.asserted) {
              member = f;
            }
          }
          clause.importance = forest.importances[member];
          pending.push_back({std::move(clause), member});
        }
        rule.alternatives.emplace(meta.group, std::move(alt));
        break;
      }
      case FeatureKind::ordinal: {
        FeatureRange code_range = r;
        code_range.lower = scaler.inverse(r.feature, r.lower);
        code_range.upper = scaler.inverse(r.feature, r.upper);
        RuleClause clause;
        clause.feature_name = meta.name;
        clause.kind = ClauseKind::ordinal_set;
        clause.categories = map_ordinal(code_range, meta);
        clause.importance = forest.importances[r.feature];
        pending.push_back({std::move(clause), r.feature});
        break;
      }
      case FeatureKind::numeric: {
        RuleClause clause;
        clause.feature_name = meta.name;
        clause.kind = ClauseKind::numeric_range;
        clause.lower = scaler.inverse(r.feature, r.lower);
        clause.upper = scaler.inverse(r.feature, r.upper);
        clause.lower_strict = r.lower_strict;
        clause.importance = forest.importances[r.feature];
        pending.push_back({std::move(clause), r.feature});
        break;
      }
    }
  }

  std::stable_sort(pending.begin(), pending.end(),
                   [](const Pending& a, const Pending& b) {
                     if (a.clause.importance != b.clause.importance) {
                       return a.clause.importance > b.clause.importance;
                     }
                     return a.sort_feature < b.sort_feature;
                   });

  if (hide_last_n > 0 && hide_last_n >= static_cast<int>(pending.size())) {
    throw std::invalid_argument("hide_last_n must be below the clause count");
  }
  const int visible = static_cast<int>(pending.size()) - hide_last_n;
  for (int i = 0; i < static_cast<int>(pending.size()); ++i) {
    pending[i].clause.hidden = i >= visible;
    rule.clauses.push_back(std::move(pending[i].clause));
  }
  return rule;
}

std::string render_rule_text(const Rule& rule) {
  std::string text = "if ";
  bool first = true;
  int hidden = 0;
  for (const RuleClause& c : rule.clauses) {
    if (c.hidden) {
      hidden++;
      continue;
    }
    if (!first) text += " and ";
    first = false;
    switch (c.kind) {
      case ClauseKind::numeric_range:
        text += format_bound(c.lower) + " ≤ " + c.feature_name +
                " ≤ " + format_bound(c.upper);
        break;
      case ClauseKind::categorical_equals:
        text += c.feature_name + "^c = " + c.category;
        break;
      case ClauseKind::ordinal_set:
        if (c.categories.size() == 1) {
          text += c.feature_name + "^c = " + c.categories.front();
        } else {
          text += c.feature_name + "^c = [";
          for (std::size_t i = 0; i < c.categories.size(); ++i) {
            if (i) text += ", ";
            text += c.categories[i];
          }
          text += "]";
        }
        break;
    }
  }
  if (hidden > 0) {
    if (!first) text += " and ";
    first = false;
    text += "[other " + std::to_string(hidden) + " feature-ranges]";
  }
  if (first) text += "[no feature-ranges]";
  text += " then " + rule.predicted_class_label;
  return text;
}

nlohmann::json rule_to_json(const Rule& rule) {
  nlohmann::json doc;
  nlohmann::json clauses = nlohmann::json::array();
  for (const RuleClause& c : rule.clauses) {
    nlohmann::json j;
    j["feature"] = c.feature_name;
    j["importance"] = c.importance;
    j["hidden"] = c.hidden;
    switch (c.kind) {
      case ClauseKind::numeric_range:
        j["kind"] = "numeric_range";
        j["lower"] = c.lower;
        j["upper"] = c.upper;
        j["lower_open"] = c.lower_strict;
        j["upper_open"] = false;
        break;
      case ClauseKind::categorical_equals:
        j["kind"] = "categorical_equals";
        j["category"] = c.category;
        break;
      case ClauseKind::ordinal_set:
        j["kind"] = "ordinal_set";
        j["categories"] = c.categories;
        break;
    }
    clauses.push_back(std::move(j));
  }
  doc["clauses"] = std::move(clauses);
  doc["class"] = rule.predicted_class_label;

  nlohmann::json alternatives = nlohmann::json::object();
  for (const auto& [group, alt] : rule.alternatives) {
    nlohmann::json j;
    j["value"] = alt.asserted ? nlohmann::json(*alt.asserted)
                              : nlohmann::json(nullptr);
    j["may_affect"] = alt.may_affect;
    j["preserves"] = alt.preserves;
    alternatives[group] = std::move(j);
  }
  doc["alternatives"] = std::move(alternatives);
  return doc;
}

}  // namespace lf
