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

#ifndef LDP_DATASET_HPP_
#define LDP_DATASET_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ldp/image.hpp"

namespace ldp {

enum class Label { kNormal, kPneumonia };
enum class Split { kTrain, kVal, kTest };

std::string_view label_name(Label label) noexcept;
Label parse_label(std::string_view name);
std::string_view split_name(Split split) noexcept;
Split parse_split(std::string_view name);

struct ManifestEntry {
  std::string path;  // relative to the manifest root, '/'-separated
  Label label = Label::kNormal;
  std::optional<Split> split;  // unset until split_dataset runs

  bool operator==(const ManifestEntry&) const = default;
};

/// Labeled file listing. Entries are kept unique and sorted by path
/// (byte-wise); an entry's position in that order is its image index.
struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;
  std::uint64_t split_seed = 0;
  std::string source;

  bool operator==(const DatasetManifest&) const = default;
};

inline constexpr std::string_view kManifestFileName = "manifest.json";
inline constexpr std::string_view kProvenanceFileName = "_ldp_provenance.json";

// Sorts entries canonically and rejects duplicate paths.
void canonicalize(DatasetManifest& manifest);

// SHA-256 over "path\tlabel\tsplit\n" for every entry in canonical order.
std::string manifest_digest(const DatasetManifest& manifest);

// "root" is written as given; relative roots are resolved against the
// manifest file's directory on load.
nlohmann::json manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j);
void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& file);
DatasetManifest load_manifest(const std::filesystem::path& file);

// Finds NORMAL/ and PNEUMONIA/ (any case) under root and lists every file
// with a PNG or JPEG signature beneath them.
DatasetManifest scan_dataset(const std::filesystem::path& root);

struct SplitRatios {
  double train = 0.7;
  double val = 0.15;
  double test = 0.15;
};

/**
 * Stratified split. Each class is shuffled by a Fisher-Yates permutation
 * drawn from RandomStream(seed, class index) and cut into train/val/test
 * counts by largest-remainder rounding: every split gets floor(n * ratio),
 * and the leftover items go one each to the splits with the largest
 * fractional parts, ties broken in train, val, test order.
 */
DatasetManifest split_dataset(const DatasetManifest& manifest,
                              const SplitRatios& ratios, std::uint64_t seed);

// Per-split counts for n items; exposed for tests and reports.
std::array<std::size_t, 3> split_counts(std::size_t n,
                                        const SplitRatios& ratios);

struct SyntheticOptions {
  std::uint32_t n_per_class = 50;
  std::uint32_t image_size = 64;
  std::uint64_t seed = 7;
};

// Writes <out_dir>/NORMAL/normal_NNNN.png and PNEUMONIA/pneumonia_NNNN.png.
// Normal: soft bright disk on a noisy dark background. Pneumonia: the same
// disk crossed by horizontal bright bars. Returns the unsplit manifest.
DatasetManifest generate_synthetic(const SyntheticOptions& options,
                                   const std::filesystem::path& out_dir);

struct PerturbationProvenance {
  double beta = 0.0;
  double epsilon_per_pixel = 0.0;     // +inf when beta == 0
  double epsilon_naive_total = 0.0;   // +inf when beta == 0
  double sensitivity = 1.0;
  std::uint64_t master_seed = 0;
  bool clamp = false;
  ExportFormat format = ExportFormat::kF32Raw;
  std::string source_manifest_digest;

  bool operator==(const PerturbationProvenance&) const = default;
};

nlohmann::json provenance_to_json(const PerturbationProvenance& p);
PerturbationProvenance provenance_from_json(const nlohmann::json& j);
PerturbationProvenance load_provenance(const std::filesystem::path& dataset_dir);

struct MaterializeOptions {
  double beta = 0.0;
  std::uint64_t master_seed = 0;
  bool clamp = false;
  ExportFormat format = ExportFormat::kF32Raw;
  std::uint32_t target_size = 256;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct MaterializedDataset {
  DatasetManifest manifest;
  PerturbationProvenance provenance;
};

/**
 * Preprocesses and perturbs every entry, writing <out_dir>/<relative path
 * with the format's extension>. Image index = canonical position. The output
 * manifest is saved as manifest.json with root "."; the provenance sidecar
 * is written last through a rename, so its presence marks a complete tree.
 */
MaterializedDataset materialize_perturbed(const DatasetManifest& manifest,
                                          const MaterializeOptions& options,
                                          const std::filesystem::path& out_dir);

// Pooled per-pixel residuals (perturbed - preprocessed source) between a
// source manifest and a perturbed tree materialized from it.
std::vector<double> pooled_residuals(const DatasetManifest& source,
                                     const std::filesystem::path& perturbed_dir);

}  // namespace ldp

#endif  // LDP_DATASET_HPP_
