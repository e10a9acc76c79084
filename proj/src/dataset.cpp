#include "localforest/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "localforest/errors.hpp"
#include "localforest/forest_json.hpp"

namespace lf {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_number(const std::string& cell, const std::string& context) {
  try {
    std::size_t consumed = 0;
    const double v = std::stod(cell, &consumed);
    if (consumed != cell.size() || !std::isfinite(v)) {
      throw std::invalid_argument(cell);
    }
    return v;
  } catch (const std::exception&) {
    throw DataError(context + ": not a number: \"" + cell + "\"");
  }
}

std::string category_list(const std::vector<std::string>& categories) {
  std::string out;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (i) out += ", ";
    out += categories[i];
  }
  return out;
}

}  // namespace

DatasetMeta read_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open meta file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }

  DatasetMeta meta;
  if (!doc.is_object() || !doc.contains("features") || !doc.contains("label")) {
    throw DataError(path + ": meta needs \"features\" and \"label\"");
  }

  std::set<std::string> names;
  for (const auto& f : doc["features"]) {
    ColumnSpec col;
    if (!f.is_object() || !f.contains("name") || !f.contains("type")) {
      throw DataError(path + ": each feature needs \"name\" and \"type\"");
    }
    col.name = f["name"].get<std::string>();
    if (!names.insert(col.name).second) {
      throw DataError(path + ": duplicate column \"" + col.name + "\"");
    }
    const std::string type = f["type"].get<std::string>();
    if (type == "numeric") {
      col.type = ColumnType::numeric;
    } else if (type == "categorical") {
      col.type = ColumnType::categorical;
      const std::string encoding = f.value("encoding", "onehot");
      if (encoding == "onehot") {
        col.encoding = CategoricalEncoding::onehot;
      } else if (encoding == "ordinal") {
        col.encoding = CategoricalEncoding::ordinal;
      } else {
        throw DataError(path + ": column \"" + col.name +
                        "\": unknown encoding \"" + encoding + "\"");
      }
      if (!f.contains("categories") || !f["categories"].is_array() ||
          f["categories"].size() < 2) {
        throw DataError(path + ": column \"" + col.name +
                        "\" needs at least two categories");
      }
      std::set<std::string> seen;
      for (const auto& c : f["categories"]) {
        const auto cat = c.get<std::string>();
        if (!seen.insert(cat).second) {
          throw DataError(path + ": column \"" + col.name +
                          "\": duplicate category \"" + cat + "\"");
        }
        col.categories.push_back(cat);
      }
    } else {
      throw DataError(path + ": column \"" + col.name + "\": unknown type \"" +
                      type + "\"");
    }
    meta.columns.push_back(std::move(col));
  }
  if (meta.columns.empty()) throw DataError(path + ": no feature columns");

  const json& label = doc["label"];
  if (!label.is_object() || !label.contains("column") ||
      !label.contains("values")) {
    throw DataError(path + ": label needs \"column\" and \"values\"");
  }
  meta.label.column = label["column"].get<std::string>();
  if (names.count(meta.label.column)) {
    throw DataError(path + ": label column \"" + meta.label.column +
                    "\" also listed as a feature");
  }
  const json& values = label["values"];
  if (!values.is_array() || values.size() != 2) {
    throw DataError(path + ": label \"values\" must list the class 0 and "
                           "class 1 spellings");
  }
  meta.label.values = {values[0].get<std::string>(),
                       values[1].get<std::string>()};
  if (meta.label.values[0] == meta.label.values[1]) {
    throw DataError(path + ": label values must differ");
  }
  if (label.contains("names")) {
    const json& display = label["names"];
    if (!display.is_array() || display.size() != 2) {
      throw DataError(path + ": label \"names\" must hold two entries");
    }
    meta.label.names = {display[0].get<std::string>(),
                        display[1].get<std::string>()};
  } else {
    meta.label.names = meta.label.values;
  }
  return meta;
}

RawTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file: " + path);

  RawTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " cells, got " +
                      std::to_string(cells.size()));
    }
    const bool missing =
        std::any_of(cells.begin(), cells.end(),
                    [](const std::string& c) { return c == "?"; });
    if (missing) {
      table.dropped_missing++;
      continue;
    }
    table.rows.push_back(std::move(cells));
    table.source_lines.push_back(line_no);
  }
  if (table.header.empty()) throw DataError(path + ": empty file");
  return table;
}

int encoded_width(const DatasetMeta& meta) {
  int width = 0;
  for (const ColumnSpec& col : meta.columns) {
    width += (col.type == ColumnType::categorical &&
              col.encoding == CategoricalEncoding::onehot)
                 ? static_cast<int>(col.categories.size())
                 : 1;
  }
  return width;
}

namespace {

std::vector<FeatureMeta> build_feature_space(const DatasetMeta& meta) {
  std::vector<FeatureMeta> features;
  for (const ColumnSpec& col : meta.columns) {
    if (col.type == ColumnType::numeric) {
      FeatureMeta m;
      m.name = col.name;
      m.kind = FeatureKind::numeric;
      m.global_min = -1.0;
      m.global_max = 1.0;
      features.push_back(std::move(m));
    } else if (col.encoding == CategoricalEncoding::onehot) {
      for (const std::string& cat : col.categories) {
        FeatureMeta m;
        m.name = col.name + "_" + cat;
        m.kind = FeatureKind::onehot_member;
        m.group = col.name;
        m.category = cat;
        m.global_min = 0.0;
        m.global_max = 1.0;
        features.push_back(std::move(m));
      }
    } else {
      FeatureMeta m;
      m.name = col.name;
      m.kind = FeatureKind::ordinal;
      m.categories = col.categories;
      m.global_min = -1.0;
      m.global_max = 1.0;
      features.push_back(std::move(m));
    }
  }
  return features;
}

// Raw (pre-scaling) encoded value of one column cell; one-hot columns write
// their whole member block.
void encode_cell(const ColumnSpec& col, const std::string& cell,
                 const std::string& context, std::vector<double>& out) {
  if (col.type == ColumnType::numeric) {
    out.push_back(parse_number(cell, context));
    return;
  }
  const auto it =
      std::find(col.categories.begin(), col.categories.end(), cell);
  if (it == col.categories.end()) {
    throw DataError(context + ": unknown category \"" + cell +
                    "\" for column \"" + col.name + "\" (valid: " +
                    category_list(col.categories) + ")");
  }
  const auto code = static_cast<int>(it - col.categories.begin());
  if (col.encoding == CategoricalEncoding::onehot) {
    for (std::size_t i = 0; i < col.categories.size(); ++i) {
      out.push_back(i == static_cast<std::size_t>(code) ? 1.0 : 0.0);
    }
  } else {
    out.push_back(static_cast<double>(code));
  }
}

}  // namespace

EncodedDataset encode_dataset(const RawTable& table, const DatasetMeta& meta) {
  std::map<std::string, int> header_pos;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    header_pos[table.header[i]] = static_cast<int>(i);
  }
  std::set<std::string> expected;
  for (const ColumnSpec& col : meta.columns) {
    if (!header_pos.count(col.name)) {
      throw DataError("CSV is missing column \"" + col.name + "\"");
    }
    expected.insert(col.name);
  }
  if (!header_pos.count(meta.label.column)) {
    throw DataError("CSV is missing label column \"" + meta.label.column + "\"");
  }
  expected.insert(meta.label.column);
  for (const std::string& name : table.header) {
    if (!expected.count(name)) {
      throw DataError("CSV column \"" + name +
                      "\" is not described by the dataset meta");
    }
  }

  EncodedDataset out;
  out.features = build_feature_space(meta);
  const int width = static_cast<int>(out.features.size());
  const int label_pos = header_pos[meta.label.column];

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cells = table.rows[r];
    const std::string context =
        "row " + std::to_string(table.source_lines[r]);
    std::vector<double> row;
    row.reserve(width);
    for (const ColumnSpec& col : meta.columns) {
      encode_cell(col, cells[header_pos[col.name]], context, row);
    }
    out.data.rows.push_back(std::move(row));

    const std::string& label_cell = cells[label_pos];
    if (label_cell == meta.label.values[0]) {
      out.data.labels.push_back(0);
    } else if (label_cell == meta.label.values[1]) {
      out.data.labels.push_back(1);
    } else {
      throw DataError(context + ": unknown label \"" + label_cell +
                      "\" (valid: " + meta.label.values[0] + ", " +
                      meta.label.values[1] + ")");
    }
  }
  if (out.data.rows.empty()) throw DataError("empty dataset");

  // Fit the scaler: numeric and ordinal axes map onto [-1, 1]; one-hot
  // members are exempt.
  out.scaler.features.resize(width);
  for (int f = 0; f < width; ++f) {
    FeatureScale& s = out.scaler.features[f];
    if (out.features[f].kind == FeatureKind::onehot_member) {
      s.scaled = false;
      s.data_min = 0.0;
      s.data_max = 1.0;
      continue;
    }
    double lo = out.data.rows[0][f];
    double hi = lo;
    for (const auto& row : out.data.rows) {
      lo = std::min(lo, row[f]);
      hi = std::max(hi, row[f]);
    }
    if (!(hi - lo > 0.0)) {
      // A constant column cannot be min-max scaled; widen the span so the
      // value lands mid-range and the bounds invariant holds.
      lo -= 0.5;
      hi += 0.5;
    }
    s.scaled = true;
    s.data_min = lo;
    s.data_max = hi;
  }
  for (auto& row : out.data.rows) {
    for (int f = 0; f < width; ++f) row[f] = out.scaler.transform(f, row[f]);
  }
  return out;
}

EncodedInstance encode_instance(const std::vector<std::string>& raw,
                                const DatasetMeta& meta,
                                const std::vector<FeatureMeta>& features,
                                const ScalerState& scaler) {
  if (raw.size() != meta.columns.size()) {
    throw DataError("expected " + std::to_string(meta.columns.size()) +
                    " feature values, got " + std::to_string(raw.size()));
  }
  EncodedInstance out;
  out.values.reserve(features.size());
  for (std::size_t c = 0; c < meta.columns.size(); ++c) {
    encode_cell(meta.columns[c], raw[c], "value of \"" + meta.columns[c].name +
                                             "\"",
                out.values);
  }
  for (std::size_t f = 0; f < out.values.size(); ++f) {
    double v = scaler.transform(static_cast<int>(f), out.values[f]);
    const double lo = features[f].global_min;
    const double hi = features[f].global_max;
    if (v < lo || v > hi) {
      v = std::clamp(v, lo, hi);
      out.clamped.push_back(features[f].name);
    }
    out.values[f] = v;
  }
  return out;
}

void save_bundle(const ModelBundle& bundle, const std::string& path) {
  json meta;
  json columns = json::array();
  for (const ColumnSpec& col : bundle.meta.columns) {
    json j;
    j["name"] = col.name;
    j["type"] = col.type == ColumnType::numeric ? "numeric" : "categorical";
    if (col.type == ColumnType::categorical) {
      j["encoding"] =
          col.encoding == CategoricalEncoding::onehot ? "onehot" : "ordinal";
      j["categories"] = col.categories;
    }
    columns.push_back(std::move(j));
  }
  meta["features"] = std::move(columns);
  meta["label"] = {{"column", bundle.meta.label.column},
                   {"values", bundle.meta.label.values},
                   {"names", bundle.meta.label.names}};

  json scaler = json::array();
  for (const FeatureScale& s : bundle.scaler.features) {
    scaler.push_back({{"scaled", s.scaled},
                      {"min", s.data_min},
                      {"max", s.data_max}});
  }

  json doc;
  doc["format"] = "localforest-model";
  doc["forest"] = json::parse(serialize_forest(bundle.forest));
  doc["scaler"] = std::move(scaler);
  doc["dataset"] = std::move(meta);

  std::ofstream out(path);
  if (!out) throw ModelError("cannot write model file: " + path);
  out << doc.dump() << "\n";
}

ModelBundle load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ModelError(path + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "localforest-model") {
    throw ModelError(path + ": not a localforest model file");
  }
  if (!doc.contains("forest") || !doc.contains("scaler") ||
      !doc.contains("dataset")) {
    throw ModelError(path + ": model file needs \"forest\", \"scaler\" and "
                            "\"dataset\"");
  }

  ModelBundle bundle;
  bundle.forest = deserialize_forest(doc["forest"].dump());

  const json& scaler = doc["scaler"];
  if (!scaler.is_array() ||
      scaler.size() != bundle.forest.features.size()) {
    throw ModelError(path + ": scaler does not match the feature space");
  }
  for (const auto& s : scaler) {
    FeatureScale fs;
    fs.scaled = s.value("scaled", true);
    fs.data_min = s.value("min", 0.0);
    fs.data_max = s.value("max", 1.0);
    if (fs.scaled && !(fs.data_min < fs.data_max)) {
      throw ModelError(path + ": scaler range must be non-degenerate");
    }
    bundle.scaler.features.push_back(fs);
  }

  const json& dataset = doc["dataset"];
  if (!dataset.is_object() || !dataset.contains("features") ||
      !dataset.contains("label")) {
    throw ModelError(path + ": model dataset section is incomplete");
  }
  for (const auto& f : dataset["features"]) {
    ColumnSpec col;
    col.name = f.at("name").get<std::string>();
    const std::string type = f.at("type").get<std::string>();
    col.type = type == "numeric" ? ColumnType::numeric : ColumnType::categorical;
    if (col.type == ColumnType::categorical) {
      col.encoding = f.value("encoding", "onehot") == "ordinal"
                         ? CategoricalEncoding::ordinal
                         : CategoricalEncoding::onehot;
      for (const auto& c : f.at("categories")) {
        col.categories.push_back(c.get<std::string>());
      }
    }
    bundle.meta.columns.push_back(std::move(col));
  }
  const json& label = dataset["label"];
  bundle.meta.label.column = label.at("column").get<std::string>();
  bundle.meta.label.values = {label.at("values")[0].get<std::string>(),
                              label.at("values")[1].get<std::string>()};
  if (label.contains("names")) {
    bundle.meta.label.names = {label.at("names")[0].get<std::string>(),
                               label.at("names")[1].get<std::string>()};
  } else {
    bundle.meta.label.names = bundle.meta.label.values;
  }

  if (encoded_width(bundle.meta) != bundle.forest.n_features()) {
    throw ModelError(path + ": dataset meta does not match the forest's "
                            "feature space");
  }
  return bundle;
}

}  // namespace lf
