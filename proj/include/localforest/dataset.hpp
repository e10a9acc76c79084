#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "localforest/forest.hpp"
#include "localforest/scaler.hpp"

namespace lf {

enum class ColumnType { numeric, categorical };
enum class CategoricalEncoding { onehot, ordinal };

struct ColumnSpec {
  std::string name;
  ColumnType type = ColumnType::numeric;
  CategoricalEncoding encoding = CategoricalEncoding::onehot;
  std::vector<std::string> categories;  // categorical only, distinct
};

struct LabelSpec {
  std::string column;
  std::array<std::string, 2> values;  // CSV cell spelling of class 0 / 1
  std::array<std::string, 2> names;   // display labels for class 0 / 1
};

// Schema of a CSV dataset: every CSV column is either one of the feature
// columns or the label column.
struct DatasetMeta {
  std::vector<ColumnSpec> columns;
  LabelSpec label;
};

DatasetMeta read_meta(const std::string& path);

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int dropped_missing = 0;  // rows removed because a cell held "?"
  std::vector<int> source_lines;  // 1-based line of each kept row
};

// Comma-separated, header row required, cells trimmed; rows containing a
// "?" cell are dropped and counted. Throws DataError with file:line context.
RawTable read_csv(const std::string& path);

struct EncodedDataset {
  LabeledDataset data;  // scaled values
  std::vector<FeatureMeta> features;
  ScalerState scaler;
};

// Expands categoricals (one-hot groups keep their {0,1} axes; ordinals
// become integer codes), fits the min-max scaler on the numeric and ordinal
// columns, and maps them to [-1, 1]. Column order follows the meta, not the
// CSV header. Throws DataError on unknown categories, bad numbers, or
// columns that the meta does not account for.
EncodedDataset encode_dataset(const RawTable& table, const DatasetMeta& meta);

struct EncodedInstance {
  Instance values;
  std::vector<std::string> clamped;  // features pulled back into range
};

// Encodes one row of raw feature values (ordered like meta.columns, label
// excluded) with a previously fitted scaler; out-of-range numerics are
// clamped to the training bounds and reported.
EncodedInstance encode_instance(const std::vector<std::string>& raw,
                                const DatasetMeta& meta,
                                const std::vector<FeatureMeta>& features,
                                const ScalerState& scaler);

// Number of encoded feature axes the meta produces.
int encoded_width(const DatasetMeta& meta);

struct ModelBundle {
  Forest forest;
  ScalerState scaler;
  DatasetMeta meta;
};

void save_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle load_bundle(const std::string& path);

}  // namespace lf
