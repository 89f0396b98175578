// Copyright 2026 The ldpbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDP_BENCH_HPP_
#define LDP_BENCH_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ldp/image.hpp"

namespace ldp {

/// One perturbation sweep. Each grid value gets its own directory
/// work_dir/beta_<beta>/ holding the perturbed dataset (dataset/), the
/// harness metrics (metrics.json) and the harness console log.
///
/// harness_command is an argument vector; the placeholders {DATASET_DIR},
/// {EPOCHS}, {SEED} and {METRICS_OUT} are substituted inside every argument.
struct BenchConfig {
  std::filesystem::path dataset_root;  // directory holding manifest.json
  std::vector<double> beta_grid = {0.0, 1.0, 2.0, 4.0};
  std::uint64_t master_seed = 0;
  std::uint32_t epochs = 15;
  std::vector<std::string> harness_command;
  std::filesystem::path work_dir;
  ExportFormat export_format = ExportFormat::kF32Raw;
  bool clamp = false;
  std::uint32_t target_size = 256;
  bool force = false;     // redo grid points whose metrics already parse
  unsigned harness_jobs = 1;
};

void validate(const BenchConfig& config);

struct EpochMetrics {
  std::uint32_t epoch = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;

  bool operator==(const EpochMetrics&) const = default;
};

struct BetaResult {
  double beta = 0.0;
  std::vector<EpochMetrics> per_epoch;
  double best_train_accuracy = 0.0;
  double best_test_accuracy = 0.0;
  std::uint32_t best_epoch = 0;

  bool operator==(const BetaResult&) const = default;
};

struct BenchResult {
  std::vector<BetaResult> per_beta;  // grid order
  bool complete = false;

  bool operator==(const BenchResult&) const = default;
};

inline constexpr std::string_view kMetricsFileName = "metrics.json";
inline constexpr std::string_view kBenchResultFileName = "bench_result.json";

// Directory name for one grid value: "beta_" + shortest decimal form.
std::string beta_dir_name(double beta);

std::vector<std::string> substitute_command(
    const std::vector<std::string>& templ, const std::string& dataset_dir,
    std::uint32_t epochs, std::uint64_t seed, const std::string& metrics_out);

/**
 * Validates a harness metrics document: accuracies in [0, 1], epochs
 * numbered 1..N with N == "epochs" (and == expected_epochs when nonzero),
 * best_* equal to the series maxima, best_epoch in range. Throws
 * Errc::kContractViolation on any mismatch.
 */
BetaResult parse_metrics(const nlohmann::json& j, double beta,
                         std::uint32_t expected_epochs = 0);
BetaResult load_metrics(const std::filesystem::path& file, double beta,
                        std::uint32_t expected_epochs = 0);

nlohmann::json bench_result_to_json(const BenchResult& result);
BenchResult bench_result_from_json(const nlohmann::json& j);
BenchResult load_bench_result(const std::filesystem::path& file);

/**
 * Runs the sweep in grid order. Per grid value: materialize the perturbed
 * dataset (reused if its provenance sidecar exists and force is off), run
 * the harness, parse its metrics. Grid values whose metrics already parse
 * are skipped unless force is set. The accumulated result is saved to
 * work_dir/bench_result.json after every grid value, with complete=false
 * until the sweep finishes; on error the partial result is saved and the
 * error rethrown.
 */
BenchResult run_benchmark(const BenchConfig& config);

// summary.csv, curves.csv and curves.svg. Byte-stable for equal inputs.
void emit_report(const BenchResult& result,
                 const std::filesystem::path& out_dir);

std::string render_summary_csv(const BenchResult& result);
std::string render_curves_csv(const BenchResult& result);
std::string render_curves_svg(const BenchResult& result);

}  // namespace ldp

#endif  // LDP_BENCH_HPP_
