#pragma once

#include <string>

#include "localforest/forest.hpp"

namespace lf {

// Serializes a forest as UTF-8 JSON. Object keys are emitted in sorted order
// and reals keep full round-trip precision, so serialize(deserialize(s))
// reproduces s byte for byte.
std::string serialize_forest(const Forest& forest);

// Parses and validates a forest document. Throws ParseError with the path of
// the offending node, e.g. "trees[3].left: missing \"threshold\"".
Forest deserialize_forest(const std::string& bytes);

}  // namespace lf
