#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "localforest/forest.hpp"
#include "localforest/paths.hpp"
#include "localforest/scaler.hpp"

namespace lf {

enum class ClauseKind { numeric_range, categorical_equals, ordinal_set };

// One condition of a rendered rule, in original feature units.
struct RuleClause {
  std::string feature_name;  // group name for categorical clauses
  ClauseKind kind = ClauseKind::numeric_range;
  double lower = 0.0;  // numeric_range only
  double upper = 0.0;
  bool lower_strict = false;
  std::string category;                 // categorical_equals only
  std::vector<std::string> categories;  // ordinal_set only
  double importance = 0.0;
  bool hidden = false;
};

// How the remaining categories of an asserted one-hot group relate to the
// prediction: changing it to a may_affect value might flip the vote, while
// preserves values were eliminated from every retained path and cannot.
struct Alternatives {
  std::optional<std::string> asserted;
  std::vector<std::string> may_affect;
  std::vector<std::string> preserves;
};

struct Rule {
  std::vector<RuleClause> clauses;  // sorted by descending importance
  std::string predicted_class_label;
  std::map<std::string, Alternatives> alternatives;  // by group name
};

// Splits a one-hot group's categories three ways: the member whose interval
// pins the active value (lower >= 0.5) is asserted; surviving members pinned
// to zero go to may_affect; members outside the reduced feature set go to
// preserves. Throws std::runtime_error when two members are asserted.
Alternatives map_onehot(const Forest& forest, const std::string& group,
                        const std::vector<FeatureRange>& ranges,
                        const std::set<int>& reduced_features);

// Categories of an ordinal feature whose integer codes fall inside the
// range, ends rounded to the nearest code. The range must already be in
// code units. Throws std::runtime_error when no code falls inside.
std::vector<std::string> map_ordinal(const FeatureRange& code_range,
                                     const FeatureMeta& meta);

// Builds the displayable rule from the intersected ranges: numeric and
// ordinal intervals are mapped back to original units, one-hot groups
// collapse to "group = category" clauses with their alternatives, clauses
// sort by descending forest importance, and the last hide_last_n clauses are
// marked hidden (hide_last_n must stay below the clause count).
Rule compose_rule(const std::vector<FeatureRange>& ranges, const Forest& forest,
                  const std::set<int>& reduced_features,
                  const ScalerState& scaler, const std::string& class_label,
                  int hide_last_n = 0);

// "if <clause> and ... then <label>", clauses in stored order, hidden ones
// summarized as "[other <n> feature-ranges]". Numeric ends show two
// decimals with trailing zeros trimmed.
std::string render_rule_text(const Rule& rule);

// Machine form of the rule; full-precision bounds plus openness flags.
nlohmann::json rule_to_json(const Rule& rule);

}  // namespace lf
