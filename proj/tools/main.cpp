#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "localforest/commands.hpp"
#include "localforest/errors.hpp"

namespace {

// --seed wins; LF_SEED is the fallback; otherwise 0.
std::uint64_t resolve_seed(bool seed_given, std::uint64_t seed_flag) {
  if (seed_given) return seed_flag;
  const char* env = std::getenv("LF_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t consumed = 0;
    const unsigned long long v = std::stoull(env, &consumed);
    if (consumed != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError("LF_SEED", std::string("not an integer: ") + env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explain random-forest predictions as feature-range rules"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool seed_given = false;

  lf::TrainOptions train;
  CLI::App* cmd_train = app.add_subcommand("train", "train a forest and save "
                                                    "it as a model bundle");
  cmd_train->add_option("--data", train.data_path, "training CSV")->required();
  cmd_train->add_option("--meta", train.meta_path, "dataset meta JSON")
      ->required();
  cmd_train->add_option("--out", train.out_path, "model bundle to write")
      ->required();
  cmd_train->add_option("--trees", train.n_estimators, "number of trees");
  cmd_train->add_option("--depth", train.max_depth,
                        "maximum tree depth (0 = unlimited)");
  cmd_train->add_option("--max-features", train.max_features,
                        "per-split feature budget: sqrt, log2, all or a "
                        "fraction");
  cmd_train->add_option("--min-leaf", train.min_samples_leaf,
                        "minimum samples per leaf");
  cmd_train->add_flag("--bootstrap,!--no-bootstrap", train.bootstrap,
                      "bootstrap-sample each tree's training rows");

  lf::ExplainOptions explain;
  std::string explain_row;
  int explain_index = -1;
  CLI::App* cmd_explain = app.add_subcommand(
      "explain", "produce the feature-range rule behind one prediction");
  cmd_explain->add_option("--model", explain.model_path, "model bundle")
      ->required();
  cmd_explain->add_option("--row", explain_row,
                          "instance as comma-separated feature values");
  cmd_explain->add_option("--set", explain.assignments,
                          "instance as name=value pairs");
  cmd_explain->add_option("--data", explain.data_path,
                          "CSV to take the instance from");
  cmd_explain->add_option("--index", explain_index,
                          "0-based row of --data to explain (rows with "
                          "missing values are skipped)");
  cmd_explain->add_option("--hide-last", explain.hide_last,
                          "summarize the n least important clauses");
  cmd_explain->add_flag("--json", explain.json_only, "print only the JSON rule");

  lf::BenchmarkOptions benchmark;
  CLI::App* cmd_benchmark = app.add_subcommand(
      "benchmark", "tabulate reduction ratios over a dataset");
  cmd_benchmark->add_option("--model", benchmark.model_path, "model bundle")
      ->required();
  cmd_benchmark->add_option("--data", benchmark.data_path, "instances CSV")
      ->required();
  cmd_benchmark->add_flag("--matrix,!--no-matrix", benchmark.matrix,
                          "run all 7 technique combinations");
  cmd_benchmark->add_option("--workers", benchmark.workers,
                            "worker threads (default: hardware)");
  cmd_benchmark->add_option("--csv", benchmark.csv_path,
                            "also write the table as CSV");
  cmd_benchmark->add_flag("--json", benchmark.json_out,
                          "also print the table as JSON");

  for (CLI::App* cmd : {cmd_explain, cmd_benchmark}) {
    lf::PipelineConfig* pipeline =
        cmd == cmd_explain ? &explain.pipeline : &benchmark.pipeline;
    cmd->add_flag_callback(
        "--no-ar", [pipeline] { pipeline->use_association_rules = false; },
        "disable the association-rule stage");
    cmd->add_flag_callback(
        "--no-cluster", [pipeline] { pipeline->use_clustering = false; },
        "disable the clustering stage");
    cmd->add_flag_callback(
        "--no-random", [pipeline] { pipeline->use_random = false; },
        "disable the random trimming stage");
    cmd->add_option("--min-support", pipeline->min_support,
                    "minimum itemset support for rule mining");
    cmd->add_option("--max-itemset", pipeline->max_itemset_size,
                    "largest mined itemset");
    auto* medoids = cmd->add_option("--medoids", "medoid count override");
    medoids->each([pipeline](const std::string& v) {
      pipeline->n_medoids = std::stoi(v);
    });
    cmd->add_option("--min-path-fraction", pipeline->min_path_fraction,
                    "keep at least this fraction of the voting paths");
  }
  for (CLI::App* cmd : {cmd_train, cmd_explain, cmd_benchmark}) {
    cmd->add_option("--seed", seed, "RNG seed (falls back to LF_SEED)")
        ->each([&seed_given](const std::string&) { seed_given = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lf::kExitUsage;
  }

  try {
    const std::uint64_t effective_seed = resolve_seed(seed_given, seed);
    if (app.got_subcommand(cmd_train)) {
      train.seed = effective_seed;
      return lf::cmd_train(train, std::cout, std::cerr);
    }
    if (app.got_subcommand(cmd_explain)) {
      explain.pipeline.seed = effective_seed;
      if (!explain_row.empty()) explain.row = explain_row;
      if (explain_index >= 0) explain.row_index = explain_index;
      return lf::cmd_explain(explain, std::cout, std::cerr);
    }
    benchmark.pipeline.seed = effective_seed;
    return lf::cmd_benchmark(benchmark, std::cout, std::cerr);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return lf::kExitUsage;
  } catch (const lf::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lf::kExitDataError;
  } catch (const lf::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lf::kExitModelError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lf::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
