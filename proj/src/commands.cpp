#include "localforest/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "localforest/dataset.hpp"
#include "localforest/errors.hpp"
#include "localforest/interpret.hpp"
#include "localforest/rng.hpp"

namespace lf {

namespace {

TrainParams parse_train_params(const TrainOptions& opts) {
  TrainParams params;
  params.n_estimators = opts.n_estimators;
  params.max_depth = opts.max_depth;
  params.min_samples_leaf = opts.min_samples_leaf;
  params.bootstrap = opts.bootstrap;
  params.seed = opts.seed;
  if (opts.max_features == "sqrt") {
    params.max_features = MaxFeaturesStrategy::sqrt_of;
  } else if (opts.max_features == "log2") {
    params.max_features = MaxFeaturesStrategy::log2_of;
  } else if (opts.max_features == "all") {
    params.max_features = MaxFeaturesStrategy::all;
  } else {
    params.max_features = MaxFeaturesStrategy::fraction;
    try {
      params.max_features_fraction = std::stod(opts.max_features);
    } catch (const std::exception&) {
      throw std::invalid_argument("--max-features must be sqrt, log2, all or "
                                  "a fraction in (0, 1]");
    }
    if (!(params.max_features_fraction > 0.0 &&
          params.max_features_fraction <= 1.0)) {
      throw std::invalid_argument("--max-features fraction must be in (0, 1]");
    }
  }
  return params;
}

// Seeded stratified 80/20 split; returns holdout F1 of the positive class,
// or nothing when a split would leave one side degenerate.
std::optional<double> holdout_f1(const EncodedDataset& encoded,
                                 const std::vector<FeatureMeta>& features,
                                 const TrainParams& params) {
  std::vector<int> by_class[2];
  for (std::size_t i = 0; i < encoded.data.labels.size(); ++i) {
    by_class[encoded.data.labels[i]].push_back(static_cast<int>(i));
  }
  Rng rng(mix_seed(params.seed, 0xf1));
  std::vector<int> train_idx;
  std::vector<int> test_idx;
  for (auto& bucket : by_class) {
    rng.shuffle(bucket);
    const auto cut = bucket.size() - bucket.size() / 5;
    train_idx.insert(train_idx.end(), bucket.begin(), bucket.begin() + cut);
    test_idx.insert(test_idx.end(), bucket.begin() + cut, bucket.end());
  }
  if (test_idx.empty()) return std::nullopt;

  LabeledDataset train;
  for (int i : train_idx) {
    train.rows.push_back(encoded.data.rows[i]);
    train.labels.push_back(encoded.data.labels[i]);
  }
  bool seen[2] = {false, false};
  for (int y : train.labels) seen[y] = true;
  if (!seen[0] || !seen[1]) return std::nullopt;

  const Forest forest = train_forest(train, features, params);
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  for (int i : test_idx) {
    const int predicted =
        forest_predict(forest, encoded.data.rows[i]).predicted_class;
    const int actual = encoded.data.labels[i];
    if (predicted == 1 && actual == 1) tp++;
    if (predicted == 1 && actual == 0) fp++;
    if (predicted == 0 && actual == 1) fn++;
  }
  if (2 * tp + fp + fn == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

std::vector<std::string> split_values(const std::string& row) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(row);
  while (std::getline(in, cell, ',')) {
    const auto begin = cell.find_first_not_of(" \t");
    const auto end = cell.find_last_not_of(" \t");
    cells.push_back(begin == std::string::npos
                        ? ""
                        : cell.substr(begin, end - begin + 1));
  }
  return cells;
}

// Raw feature values (meta column order) for the instance the options name.
std::vector<std::string> gather_instance(const ExplainOptions& opts,
                                         const DatasetMeta& meta) {
  const int sources = (opts.row ? 1 : 0) + (!opts.assignments.empty() ? 1 : 0) +
                      (opts.row_index ? 1 : 0);
  if (sources != 1) {
    throw DataError(
        "specify the instance exactly one way: --row, --set or --data with "
        "--index");
  }

  if (opts.row) {
    std::vector<std::string> cells = split_values(*opts.row);
    if (cells.size() == meta.columns.size() + 1) {
      cells.pop_back();  // trailing label cell is tolerated and ignored
    }
    if (cells.size() != meta.columns.size()) {
      throw DataError("--row needs " + std::to_string(meta.columns.size()) +
                      " feature values (label optional), got " +
                      std::to_string(cells.size()));
    }
    return cells;
  }

  if (opts.row_index) {
    if (opts.data_path.empty()) throw DataError("--index needs --data");
    const RawTable table = read_csv(opts.data_path);
    if (*opts.row_index < 0 ||
        *opts.row_index >= static_cast<int>(table.rows.size())) {
      throw DataError("--index " + std::to_string(*opts.row_index) +
                      " outside the " + std::to_string(table.rows.size()) +
                      " data rows");
    }
    std::map<std::string, int> pos;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      pos[table.header[i]] = static_cast<int>(i);
    }
    std::vector<std::string> cells;
    for (const ColumnSpec& col : meta.columns) {
      const auto it = pos.find(col.name);
      if (it == pos.end()) {
        throw DataError("CSV is missing column \"" + col.name + "\"");
      }
      cells.push_back(table.rows[*opts.row_index][it->second]);
    }
    return cells;
  }

  std::map<std::string, std::string> assigned;
  for (const std::string& item : opts.assignments) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw DataError("--set entries must look like name=value, got \"" +
                      item + "\"");
    }
    assigned[item.substr(0, eq)] = item.substr(eq + 1);
  }
  std::vector<std::string> cells;
  std::vector<std::string> missing;
  for (const ColumnSpec& col : meta.columns) {
    const auto it = assigned.find(col.name);
    if (it == assigned.end()) {
      missing.push_back(col.name);
      continue;
    }
    cells.push_back(it->second);
    assigned.erase(it);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i) list += ", ";
      list += missing[i];
    }
    throw DataError("--set is missing values for: " + list);
  }
  if (!assigned.empty()) {
    throw DataError("--set names unknown column \"" + assigned.begin()->first +
                    "\"");
  }
  return cells;
}

struct RatioStats {
  double mean = 0.0;
  double stddev = 0.0;
};

RatioStats stats(const std::vector<double>& xs) {
  RatioStats s;
  if (xs.empty()) return s;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  for (double x : xs) s.stddev += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(s.stddev / n);
  return s;
}

}  // namespace

int cmd_train(const TrainOptions& opts, std::ostream& out, std::ostream& err) {
  const TrainParams params = parse_train_params(opts);
  const DatasetMeta meta = read_meta(opts.meta_path);
  const RawTable table = read_csv(opts.data_path);
  if (table.dropped_missing > 0) {
    err << "dropped " << table.dropped_missing
        << " rows with missing values\n";
  }
  const EncodedDataset encoded = encode_dataset(table, meta);

  ModelBundle bundle;
  bundle.forest = train_forest(encoded.data, encoded.features, params);
  bundle.scaler = encoded.scaler;
  bundle.meta = meta;
  save_bundle(bundle, opts.out_path);

  out << "trained " << params.n_estimators << " trees on "
      << encoded.data.rows.size() << " rows, " << encoded.features.size()
      << " encoded features\n";
  if (const auto f1 = holdout_f1(encoded, encoded.features, params)) {
    out << "holdout F1 (20% split) = " << std::fixed << std::setprecision(4)
        << *f1 << std::defaultfloat << "\n";
  } else {
    out << "dataset too small for a holdout estimate\n";
  }
  out << "model written to " << opts.out_path << "\n";
  return kExitOk;
}

int cmd_explain(const ExplainOptions& opts, std::ostream& out,
                std::ostream& err) {
  const ModelBundle bundle = load_bundle(opts.model_path);
  const std::vector<std::string> raw = gather_instance(opts, bundle.meta);
  const EncodedInstance instance =
      encode_instance(raw, bundle.meta, bundle.forest.features, bundle.scaler);
  for (const std::string& name : instance.clamped) {
    err << "warning: value of \"" << name
        << "\" outside the training range, clamped\n";
  }

  const ReduceResult reduced =
      reduce(bundle.forest, instance.values, opts.pipeline);
  const std::vector<FeatureRange> ranges =
      intersect_ranges(reduced.paths, bundle.forest.features);
  std::set<int> reduced_features;
  for (const FeatureRange& r : ranges) reduced_features.insert(r.feature);

  const int predicted = reduced.paths.front().voted_class;
  const Rule rule =
      compose_rule(ranges, bundle.forest, reduced_features, bundle.scaler,
                   bundle.meta.label.names[predicted], opts.hide_last);

  nlohmann::json doc = rule_to_json(rule);
  if (!instance.clamped.empty()) doc["clamped"] = instance.clamped;

  if (!opts.json_only) out << render_rule_text(rule) << "\n";
  out << doc.dump() << "\n";
  return kExitOk;
}

int cmd_benchmark(const BenchmarkOptions& opts, std::ostream& out,
                  std::ostream& err) {
  const ModelBundle bundle = load_bundle(opts.model_path);
  const RawTable table = read_csv(opts.data_path);
  if (table.dropped_missing > 0) {
    err << "dropped " << table.dropped_missing
        << " rows with missing values\n";
  }

  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    pos[table.header[i]] = static_cast<int>(i);
  }
  std::vector<Instance> instances;
  int clamped_count = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<std::string> raw;
    for (const ColumnSpec& col : bundle.meta.columns) {
      const auto it = pos.find(col.name);
      if (it == pos.end()) {
        throw DataError("CSV is missing column \"" + col.name + "\"");
      }
      raw.push_back(table.rows[r][it->second]);
    }
    EncodedInstance enc =
        encode_instance(raw, bundle.meta, bundle.forest.features,
                        bundle.scaler);
    if (!enc.clamped.empty()) clamped_count++;
    instances.push_back(std::move(enc.values));
  }
  if (instances.empty()) throw DataError("no instances to benchmark");
  if (clamped_count > 0) {
    err << clamped_count << " instances had values outside the training "
        << "range and were clamped\n";
  }

  struct RowSpec {
    bool ar;
    bool cluster;
    bool random;
  };
  std::vector<RowSpec> rows;
  if (opts.matrix) {
    rows = {{true, true, true},   {false, true, true},  {true, false, true},
            {true, true, false},  {true, false, false}, {false, true, false},
            {false, false, true}};
  } else {
    rows = {{opts.pipeline.use_association_rules, opts.pipeline.use_clustering,
             opts.pipeline.use_random}};
  }

  int workers = opts.workers;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }

  struct RowResult {
    RowSpec spec;
    RatioStats feature;
    RatioStats path;
  };
  std::vector<RowResult> results;

  for (const RowSpec& spec : rows) {
    std::vector<double> feature_ratios(instances.size());
    std::vector<double> path_ratios(instances.size());
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto work = [&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= instances.size() || failed.load()) break;
        try {
          PipelineConfig config = opts.pipeline;
          config.use_association_rules = spec.ar;
          config.use_clustering = spec.cluster;
          config.use_random = spec.random;
          // Derived per instance, so results do not depend on scheduling.
          config.seed = mix_seed(opts.pipeline.seed, i);
          const ReduceResult r = reduce(bundle.forest, instances[i], config);
          feature_ratios[i] = r.report.feature_reduction;
          path_ratios[i] = r.report.path_reduction;
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          failed = true;
          failure = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failed) throw ModelError("benchmark failed: " + failure);

    results.push_back({spec, stats(feature_ratios), stats(path_ratios)});
  }

  const auto onoff = [](bool b) { return b ? "on " : "off"; };
  out << "rules    cluster  random   feature reduction    path reduction\n";
  out << "-----    -------  ------   -----------------    --------------\n";
  for (const RowResult& r : results) {
    out << onoff(r.spec.ar) << "      " << onoff(r.spec.cluster) << "      "
        << onoff(r.spec.random) << "      " << std::fixed
        << std::setprecision(2) << std::setw(6) << r.feature.mean * 100.0
        << " ± " << std::setw(5) << r.feature.stddev * 100.0 << " %   "
        << std::setw(6) << r.path.mean * 100.0 << " ± " << std::setw(5)
        << r.path.stddev * 100.0 << " %\n"
        << std::defaultfloat;
  }

  if (!opts.csv_path.empty()) {
    std::ofstream csv(opts.csv_path);
    if (!csv) throw DataError("cannot write CSV file: " + opts.csv_path);
    csv << "association_rules,clustering,random,feature_mean,feature_std,"
           "path_mean,path_std\n";
    for (const RowResult& r : results) {
      csv << (r.spec.ar ? 1 : 0) << "," << (r.spec.cluster ? 1 : 0) << ","
          << (r.spec.random ? 1 : 0) << "," << r.feature.mean << ","
          << r.feature.stddev << "," << r.path.mean << "," << r.path.stddev
          << "\n";
    }
    out << "table written to " << opts.csv_path << "\n";
  }

  if (opts.json_out) {
    nlohmann::json doc = nlohmann::json::array();
    for (const RowResult& r : results) {
      doc.push_back({{"association_rules", r.spec.ar},
                     {"clustering", r.spec.cluster},
                     {"random", r.spec.random},
                     {"feature_mean", r.feature.mean},
                     {"feature_std", r.feature.stddev},
                     {"path_mean", r.path.mean},
                     {"path_std", r.path.stddev}});
    }
    out << doc.dump() << "\n";
  }
  return kExitOk;
}

}  // namespace lf
