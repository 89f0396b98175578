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

#include "ldp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <string_view>
#include <utility>

#include "ldp/dataset.hpp"
#include "ldp/error.hpp"
#include "ldp/parallel.hpp"
#include "ldp/subprocess.hpp"
#include "ldp/text.hpp"

namespace fs = std::filesystem;

namespace ldp {
namespace {

constexpr std::size_t kMaxLoggedOutput = 8192;

[[noreturn]] void contract(const std::string& what) {
  throw Error(Errc::kContractViolation, what);
}

double accuracy_field(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    contract(std::string("metrics field '") + key + "' missing or not a number");
  }
  const double v = it->get<double>();
  if (!(v >= 0.0 && v <= 1.0)) {
    contract(std::string("metrics field '") + key + "' outside [0, 1]");
  }
  return v;
}

std::uint32_t epoch_field(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer() || it->get<std::int64_t>() < 1 ||
      it->get<std::int64_t>() > 1'000'000) {
    contract(std::string("metrics field '") + key +
             "' missing or not a positive integer");
  }
  return static_cast<std::uint32_t>(it->get<std::int64_t>());
}

std::string tail(const std::string& s, std::size_t n) {
  return s.size() <= n ? s : "..." + s.substr(s.size() - n);
}

}  // namespace

void validate(const BenchConfig& config) {
  if (config.beta_grid.empty()) {
    throw Error(Errc::kInvalidParameter, "beta grid is empty");
  }
  for (std::size_t i = 0; i < config.beta_grid.size(); ++i) {
    const double b = config.beta_grid[i];
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw Error(Errc::kInvalidParameter,
                  "beta values must be finite and non-negative");
    }
    if (i > 0 && !(config.beta_grid[i - 1] < b)) {
      throw Error(Errc::kInvalidParameter,
                  "beta grid must be strictly ascending");
    }
  }
  if (config.epochs == 0) {
    throw Error(Errc::kInvalidParameter, "epochs must be at least 1");
  }
  if (config.harness_command.empty()) {
    throw Error(Errc::kInvalidParameter, "harness command is empty");
  }
  if (config.work_dir.empty()) {
    throw Error(Errc::kInvalidParameter, "work directory is not set");
  }
  if (config.target_size == 0) {
    throw Error(Errc::kInvalidParameter, "target size must be positive");
  }
}

std::string beta_dir_name(double beta) { return "beta_" + shortest(beta); }

std::vector<std::string> substitute_command(
    const std::vector<std::string>& templ, const std::string& dataset_dir,
    std::uint32_t epochs, std::uint64_t seed, const std::string& metrics_out) {
  const std::pair<std::string_view, std::string> fields[] = {
      {"{DATASET_DIR}", dataset_dir},
      {"{EPOCHS}", std::to_string(epochs)},
      {"{SEED}", std::to_string(seed)},
      {"{METRICS_OUT}", metrics_out}};
  std::vector<std::string> out;
  out.reserve(templ.size());
  // Single left-to-right pass; substituted text is never rescanned.
  for (const std::string& arg : templ) {
    std::string result;
    std::size_t pos = 0;
    while (pos < arg.size()) {
      bool matched = false;
      for (const auto& [key, value] : fields) {
        if (arg.compare(pos, key.size(), key) == 0) {
          result += value;
          pos += key.size();
          matched = true;
          break;
        }
      }
      if (!matched) result += arg[pos++];
    }
    out.push_back(std::move(result));
  }
  return out;
}

BetaResult parse_metrics(const nlohmann::json& j, double beta,
                         std::uint32_t expected_epochs) {
  if (!j.is_object()) contract("metrics document is not a JSON object");
  BetaResult r;
  r.beta = beta;
  const std::uint32_t epochs = epoch_field(j, "epochs");
  if (expected_epochs != 0 && epochs != expected_epochs) {
    contract("metrics report " + std::to_string(epochs) + " epochs, expected " +
             std::to_string(expected_epochs));
  }
  const auto series = j.find("per_epoch");
  if (series == j.end() || !series->is_array()) {
    contract("metrics field 'per_epoch' missing or not an array");
  }
  if (series->size() != epochs) {
    contract("per_epoch has " + std::to_string(series->size()) +
             " entries, expected " + std::to_string(epochs));
  }
  double max_train = 0.0;
  double max_test = 0.0;
  for (std::size_t i = 0; i < series->size(); ++i) {
    const auto& row = (*series)[i];
    if (!row.is_object()) contract("per_epoch entry is not an object");
    EpochMetrics m;
    m.epoch = epoch_field(row, "epoch");
    if (m.epoch != i + 1) contract("per_epoch epochs are not consecutive from 1");
    m.train_accuracy = accuracy_field(row, "train_accuracy");
    m.test_accuracy = accuracy_field(row, "test_accuracy");
    max_train = std::max(max_train, m.train_accuracy);
    max_test = std::max(max_test, m.test_accuracy);
    r.per_epoch.push_back(m);
  }
  r.best_train_accuracy = accuracy_field(j, "best_train_accuracy");
  r.best_test_accuracy = accuracy_field(j, "best_test_accuracy");
  r.best_epoch = epoch_field(j, "best_epoch");
  if (r.best_epoch > epochs) contract("best_epoch beyond the last epoch");
  if (r.best_train_accuracy != max_train || r.best_test_accuracy != max_test) {
    contract("best accuracies differ from the per-epoch maxima");
  }
  return r;
}

BetaResult load_metrics(const fs::path& file, double beta,
                        std::uint32_t expected_epochs) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(file));
  } catch (const nlohmann::json::parse_error& e) {
    contract(file.string() + ": " + e.what());
  }
  try {
    return parse_metrics(j, beta, expected_epochs);
  } catch (const Error& e) {
    throw Error(e.code(), file.string() + ": " + e.what());
  }
}

nlohmann::json bench_result_to_json(const BenchResult& result) {
  nlohmann::json per_beta = nlohmann::json::array();
  for (const BetaResult& r : result.per_beta) {
    nlohmann::json series = nlohmann::json::array();
    for (const EpochMetrics& m : r.per_epoch) {
      series.push_back({{"epoch", m.epoch},
                        {"train_accuracy", m.train_accuracy},
                        {"test_accuracy", m.test_accuracy}});
    }
    per_beta.push_back({{"beta", r.beta},
                        {"per_epoch", std::move(series)},
                        {"best_train_accuracy", r.best_train_accuracy},
                        {"best_test_accuracy", r.best_test_accuracy},
                        {"best_epoch", r.best_epoch}});
  }
  return {{"complete", result.complete}, {"per_beta", std::move(per_beta)}};
}

BenchResult bench_result_from_json(const nlohmann::json& j) {
  try {
    BenchResult result;
    result.complete = j.at("complete").get<bool>();
    for (const auto& item : j.at("per_beta")) {
      nlohmann::json metrics = item;
      metrics["epochs"] = item.at("per_epoch").size();
      result.per_beta.push_back(
          parse_metrics(metrics, item.at("beta").get<double>()));
    }
    return result;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kFormat, std::string("malformed bench result: ") + e.what());
  }
}

BenchResult load_bench_result(const fs::path& file) {
  try {
    return bench_result_from_json(nlohmann::json::parse(read_text_file(file)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kFormat, file.string() + ": " + e.what());
  }
}

BenchResult run_benchmark(const BenchConfig& config) {
  validate(config);
  const DatasetManifest manifest =
      load_manifest(config.dataset_root / kManifestFileName);
  for (const ManifestEntry& e : manifest.entries) {
    if (!e.split) {
      throw Error(Errc::kInvalidInput,
                  "manifest entry " + e.path + " has no split assigned");
    }
  }

  std::error_code ec;
  fs::create_directories(config.work_dir, ec);
  if (ec) {
    throw Error(Errc::kIo, "cannot create " + config.work_dir.string() + ": " +
                               ec.message());
  }

  const std::size_t n = config.beta_grid.size();
  std::vector<std::optional<BetaResult>> slots(n);
  std::mutex slots_mutex;

  auto save = [&](bool complete) {
    BenchResult partial;
    partial.complete = complete;
    for (const auto& slot : slots) {
      if (slot) partial.per_beta.push_back(*slot);
    }
    write_file_atomic(config.work_dir / kBenchResultFileName,
                      bench_result_to_json(partial).dump(2) + "\n");
    return partial;
  };

  auto run_point = [&](std::size_t i) {
    const double beta = config.beta_grid[i];
    const fs::path point_dir = config.work_dir / beta_dir_name(beta);
    const fs::path dataset_dir = point_dir / "dataset";
    const fs::path metrics = point_dir / kMetricsFileName;
    std::error_code point_ec;

    if (!config.force && fs::exists(metrics)) {
      try {
        BetaResult done = load_metrics(metrics, beta, config.epochs);
        std::lock_guard lock(slots_mutex);
        slots[i] = std::move(done);
        save(false);
        return;
      } catch (const Error&) {
        // Unparseable metrics mean the point never finished; redo it.
      }
    }

    if (config.force || !fs::exists(dataset_dir / kProvenanceFileName)) {
      fs::remove_all(dataset_dir, point_ec);
      MaterializeOptions options;
      options.beta = beta;
      options.master_seed = config.master_seed;
      options.clamp = config.clamp;
      options.format = config.export_format;
      options.target_size = config.target_size;
      materialize_perturbed(manifest, options, dataset_dir);
    }

    fs::remove(metrics, point_ec);
    const ProcessResult proc = run_process(
        substitute_command(config.harness_command, dataset_dir.string(),
                           config.epochs, config.master_seed, metrics.string()));
    write_file_atomic(point_dir / "harness.log", proc.output);
    if (proc.exit_code != 0) {
      throw Error(Errc::kHarnessFailure,
                  "harness exited with code " + std::to_string(proc.exit_code) +
                      " for beta=" + shortest(beta) + "; output:\n" +
                      tail(proc.output, kMaxLoggedOutput));
    }
    if (!fs::exists(metrics)) {
      contract("harness exited 0 without writing " + metrics.string());
    }
    BetaResult result = load_metrics(metrics, beta, config.epochs);
    std::lock_guard lock(slots_mutex);
    slots[i] = std::move(result);
    save(false);
  };

  try {
    parallel_for(n, run_point, std::max(1u, config.harness_jobs));
  } catch (...) {
    std::lock_guard lock(slots_mutex);
    save(false);
    throw;
  }
  return save(true);
}

}  // namespace ldp
