/*
 * Copyright 2026 The RRF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// rrf: refined random forest experiments.
//
//   rrf compare    --data <csv> --label <col> [...]   RF vs refined forest
//   rrf refine     --data <csv> --label <col> [...]   refinement trace only
//   rrf growthmath --u N --v N --f N --tav X --b N --du N --dv N
//
// Any long option may also come from `--config FILE` (flat key=value lines);
// flags on the command line win over the file.

#include <cstdio>
#include <exception>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rrf/diversity.hpp"
#include "rrf/error.hpp"
#include "rrf/growth.hpp"
#include "rrf/harness.hpp"
#include "rrf/metrics.hpp"
#include "rrf/refine.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

int exit_code_for(rrf::ErrorKind kind) {
  using rrf::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidConfig:
    case ErrorKind::kFNotPositive:
      return kExitUsage;
    case ErrorKind::kMissingLabelColumn:
    case ErrorKind::kNonNumericFeature:
    case ErrorKind::kEmptyDataset:
    case ErrorKind::kSingleClass:
    case ErrorKind::kClassTooSmall:
    case ErrorKind::kIo:
    case ErrorKind::kSingleClassPresent:
      return kExitData;
    default:
      return kExitInternal;
  }
}

// Expands `--config FILE` into `--key=value` arguments placed before the
// user's own flags so the latter take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;

  std::ifstream in(config_path);
  if (!in) throw rrf::Error(rrf::ErrorKind::kInvalidConfig, "cannot read config " + config_path);
  std::vector<std::string> from_file;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (eq == std::string::npos) {
      if (!trim(line).empty()) {
        throw rrf::Error(rrf::ErrorKind::kInvalidConfig, "bad config line: " + line);
      }
      continue;
    }
    from_file.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
  }
  // program, subcommand, file options, remaining user options
  std::vector<std::string> out;
  out.push_back(rest.at(0));
  std::size_t next = 1;
  if (rest.size() > 1 && rest[1].rfind("-", 0) != 0) out.push_back(rest[next++]);
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(next), rest.end());
  return out;
}

struct DataOptions {
  std::string data;
  std::string label;
  std::uint64_t seed = 42;
  std::size_t t0 = 20;
  std::string split = "0.6,0.2,0.2";
  std::size_t subsample = 0;
  std::size_t min_leaf = 1;
  std::size_t max_iterations = 100;
  std::size_t delta_b_cap = rrf::kDefaultDeltaBCap;
  double th = rrf::kDefaultCorrelationThreshold;
  std::size_t threads = 0;
  std::string out = "rrf_out";
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--data", o.data, "CSV file with a header row")->required();
  cmd->add_option("--label", o.label, "Label column name")->required();
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--t0", o.t0, "Initial tree count")->check(CLI::PositiveNumber);
  cmd->add_option("--split", o.split, "train,valid,test fractions");
  cmd->add_option("--subsample", o.subsample, "Cap on rows (0 = all)");
  cmd->add_option("--min-leaf,--min_leaf", o.min_leaf, "Minimum samples per leaf")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iterations,--max_iterations", o.max_iterations,
                  "Refinement iteration cap");
  cmd->add_option("--delta-b-cap,--delta_b_cap", o.delta_b_cap,
                  "Cap on trees added per iteration");
  cmd->add_option("--th", o.th, "Correlation threshold for pruning");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out", o.out, "Output directory");
}

rrf::SplitSpec parse_split(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw rrf::Error(rrf::ErrorKind::kInvalidConfig, "bad --split value: " + text);
    }
  }
  if (parts.size() != 3) {
    throw rrf::Error(rrf::ErrorKind::kInvalidConfig, "--split needs three fractions");
  }
  rrf::SplitSpec spec{parts[0], parts[1], parts[2], 0};
  spec.validate();
  return spec;
}

rrf::RunConfig to_run_config(const DataOptions& o, std::size_t repeats) {
  rrf::RunConfig c;
  c.dataset_path = o.data;
  c.label_column = o.label;
  c.split = parse_split(o.split);
  c.seed = o.seed;
  c.repeats = repeats;
  c.t0 = o.t0;
  c.min_leaf = o.min_leaf;
  c.correlation_threshold = o.th;
  c.max_iterations = o.max_iterations;
  c.delta_b_cap = o.delta_b_cap;
  if (o.subsample) c.subsample = o.subsample;
  c.n_threads = o.threads;
  c.validate();
  return c;
}

int run_compare(const DataOptions& o, std::size_t repeats) {
  const rrf::RunConfig config = to_run_config(o, repeats);
  const rrf::ComparisonReport report = rrf::run_comparison(config);
  rrf::emit_report(report, o.out);
  const auto& a = report.aggregates;
  std::printf("%s: %zu repeats\n", report.dataset_name.c_str(), report.records.size());
  std::printf("  RF   accuracy %.4f  auc %.4f\n", a.rf_accuracy.mean, a.rf_auc.mean);
  std::printf("  RRF  accuracy %.4f  auc %.4f\n", a.rrf_accuracy.mean, a.rrf_auc.mean);
  std::printf("  trees before pruning %.2f, after %.2f\n", a.trees_before_pruning.mean,
              a.trees_after_pruning.mean);
  std::printf("  wrote %s\n", o.out.c_str());
  return 0;
}

int run_refine(const DataOptions& o) {
  rrf::RunConfig config = to_run_config(o, 1);
  rrf::Dataset data = rrf::load_csv(config.dataset_path, config.label_column);
  rrf::ComparisonReport report =
      rrf::run_comparison(data, config, config.dataset_path.stem().string());
  const rrf::RepeatArtifacts& run = report.artifacts.front();

  std::filesystem::create_directories(o.out);
  const auto trace_path = std::filesystem::path(o.out) / "trace.csv";
  std::ofstream trace(trace_path);
  if (!trace) throw rrf::Error(rrf::ErrorKind::kIo, "cannot write " + trace_path.string());
  rrf::write_trace_csv(trace, run.refined.trace);
  rrf::write_trace_csv(std::cout, run.refined.trace);
  const auto& r = report.records.front();
  std::printf("features %zu -> %zu, trees %zu -> %zu after pruning, test accuracy %.4f\n",
              report.n_features, r.final_features, r.trees_before_pruning,
              r.trees_after_pruning, r.rrf_accuracy);
  return 0;
}

int run_growthmath(const rrf::GrowthParams& params, std::size_t cap) {
  const rrf::GrowthEvaluation e = rrf::evaluate_growth(params, cap);
  const std::pair<const char*, double> rows[] = {
      {"q", e.q},         {"q_u", e.q_u}, {"q_v", e.q_v}, {"zeta", e.zeta},
      {"p", e.p},         {"C", e.c},     {"eta_c", e.eta_c}, {"l", e.l},
      {"nu", e.nu},       {"bound", e.bound},
  };
  for (const auto& [name, value] : rows) std::printf("%s %.6f\n", name, value);
  std::printf("delta_b %zu\n", e.delta_b);
  if (e.degenerate) std::printf("degenerate 1\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Refined random forest: feature-pool refinement, bounded growth "
               "and correlation pruning"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", "key=value configuration file");

  DataOptions compare_opts;
  std::size_t repeats = 1;
  auto* compare = app.add_subcommand("compare", "Compare standard RF with the refined forest");
  add_data_options(compare, compare_opts);
  compare->add_option("--repeats", repeats, "Randomised repeats")->check(CLI::PositiveNumber);

  DataOptions refine_opts;
  auto* refine = app.add_subcommand("refine", "Run refinement only and emit the iteration trace");
  add_data_options(refine, refine_opts);

  rrf::GrowthParams growth;
  std::size_t cap = rrf::kDefaultDeltaBCap;
  auto* math = app.add_subcommand("growthmath", "Evaluate the tree-growth model");
  math->add_option("--u", growth.u, "Important pool size")->required();
  math->add_option("--v", growth.v, "Unimportant pool size")->required();
  math->add_option("--f", growth.f, "Features drawn per node")->required();
  math->add_option("--tav", growth.t_av, "Mean internal nodes per tree")->required();
  math->add_option("--b", growth.b, "Current tree count")->required();
  math->add_option("--du", growth.delta_u, "Change in important pool size")->required();
  math->add_option("--dv", growth.delta_v, "Change in unimportant pool size")->required();
  math->add_option("--cap", cap, "Cap on the tree increment");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::vector<char*> cargs;
    for (auto& a : args) cargs.push_back(a.data());
    app.parse(static_cast<int>(cargs.size()), cargs.data());

    if (*compare) return run_compare(compare_opts, repeats);
    if (*refine) return run_refine(refine_opts);
    if (*math) return run_growthmath(growth, cap);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const rrf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
