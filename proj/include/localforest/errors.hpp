#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lf {

// Problems with user-supplied data: CSV rows, dataset meta, instance values.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Problems with a model artifact: forest document, bundle file.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Schema violation inside a forest document. Carries the path of the node
// that failed validation, e.g. "trees[3].left.right".
class ParseError : public ModelError {
 public:
  ParseError(std::string path, const std::string& what)
      : ModelError(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace lf
