#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "localforest/pipeline.hpp"

namespace lf {

// Exit codes shared by the CLI commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitModelError = 4;

struct TrainOptions {
  std::string data_path;
  std::string meta_path;
  std::string out_path;
  int n_estimators = 100;
  int max_depth = 10;
  std::string max_features = "sqrt";  // sqrt | log2 | all | a fraction
  int min_samples_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

// Trains on the full dataset and writes the model bundle; also reports the
// F1 score of an identically configured forest on a seeded stratified 20%
// holdout.
int cmd_train(const TrainOptions& opts, std::ostream& out, std::ostream& err);

struct ExplainOptions {
  std::string model_path;
  std::optional<std::string> row;       // comma-separated feature values
  std::vector<std::string> assignments; // name=value pairs
  std::string data_path;                // with row_index
  std::optional<int> row_index;         // 0-based row of data_path
  PipelineConfig pipeline;
  int hide_last = 0;
  bool json_only = false;
};

// Prints the natural-language rule for one instance followed by its JSON
// form (JSON only with json_only).
int cmd_explain(const ExplainOptions& opts, std::ostream& out,
                std::ostream& err);

struct BenchmarkOptions {
  std::string model_path;
  std::string data_path;
  bool matrix = true;  // all 7 technique combinations vs. just the config
  PipelineConfig pipeline;
  int workers = 0;  // <= 0: hardware concurrency
  std::string csv_path;  // optional CSV copy of the table
  bool json_out = false;
};

// Reduces every instance of the dataset under each technique combination
// and tabulates mean and standard deviation of the feature and path
// reduction ratios.
int cmd_benchmark(const BenchmarkOptions& opts, std::ostream& out,
                  std::ostream& err);

}  // namespace lf
