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

#include "ldp/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>

#include "ldp/error.hpp"
#include "ldp/mechanism.hpp"
#include "ldp/parallel.hpp"
#include "ldp/random_stream.hpp"
#include "ldp/text.hpp"

namespace fs = std::filesystem;

namespace ldp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error(Errc::kIo, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

nlohmann::json number_or_inf(double value) {
  if (std::isinf(value)) return "inf";
  return value;
}

double number_or_inf(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInf;
  return j.get<double>();
}

fs::path output_relative_path(const std::string& path, ExportFormat format) {
  fs::path rel(path);
  rel.replace_extension(format_extension(format));
  return rel;
}

// Cubic smoothstep on [0, 1]; softens the disk edge.
double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

ByteImage render_synthetic(Label label, std::uint32_t size,
                           RandomStream& stream) {
  const double s = size;
  const double cx = s / 2.0 + (stream.next_uniform() - 0.5) * 0.2 * s;
  const double cy = s / 2.0 + (stream.next_uniform() - 0.5) * 0.2 * s;
  const double gain = 1.0 + (stream.next_uniform() - 0.5) * 0.2;
  const double radius = 0.3 * s;
  const double edge = 0.06 * s;
  const double bar_period = s / 8.0;

  ByteImage img;
  img.height = size;
  img.width = size;
  img.channels = 1;
  img.pixels.resize(static_cast<std::size_t>(size) * size);
  for (std::uint32_t y = 0; y < size; ++y) {
    for (std::uint32_t x = 0; x < size; ++x) {
      const double px = x + 0.5 - cx;
      const double py = y + 0.5 - cy;
      const double disk =
          smoothstep((radius - std::hypot(px, py)) / edge + 0.5);
      double v = 0.1 + 0.1 * stream.next_uniform() + 0.5 * gain * disk;
      if (label == Label::kPneumonia) {
        const double phase = py / bar_period - std::floor(py / bar_period);
        if (phase < 0.5) v += 0.3 * gain * disk;
      }
      img.pixels[static_cast<std::size_t>(y) * size + x] =
          static_cast<std::uint8_t>(std::nearbyint(std::clamp(v, 0.0, 1.0) * 255.0));
    }
  }
  return img;
}

}  // namespace

std::string_view label_name(Label label) noexcept {
  return label == Label::kNormal ? "Normal" : "Pneumonia";
}

Label parse_label(std::string_view name) {
  if (name == "Normal") return Label::kNormal;
  if (name == "Pneumonia") return Label::kPneumonia;
  throw Error(Errc::kFormat, "unknown label '" + std::string(name) + "'");
}

std::string_view split_name(Split split) noexcept {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw Error(Errc::kFormat, "unknown split '" + std::string(name) + "'");
}

void canonicalize(DatasetManifest& manifest) {
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) {
              return a.path < b.path;
            });
  const auto dup = std::adjacent_find(
      manifest.entries.begin(), manifest.entries.end(),
      [](const ManifestEntry& a, const ManifestEntry& b) {
        return a.path == b.path;
      });
  if (dup != manifest.entries.end()) {
    throw Error(Errc::kInvalidInput, "duplicate manifest path " + dup->path);
  }
}

std::string manifest_digest(const DatasetManifest& manifest) {
  DatasetManifest sorted = manifest;
  canonicalize(sorted);
  std::string text;
  for (const ManifestEntry& e : sorted.entries) {
    text += e.path;
    text += '\t';
    text += label_name(e.label);
    text += '\t';
    text += e.split ? split_name(*e.split) : std::string_view("unassigned");
    text += '\n';
  }
  return sha256_hex(text);
}

nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::json entries = nlohmann::json::array();
  for (const ManifestEntry& e : manifest.entries) {
    nlohmann::json entry = {{"path", e.path}, {"label", label_name(e.label)}};
    entry["split"] = e.split ? nlohmann::json(split_name(*e.split))
                             : nlohmann::json(nullptr);
    entries.push_back(std::move(entry));
  }
  return {{"root", manifest.root.generic_string()},
          {"split_seed", manifest.split_seed},
          {"source", manifest.source},
          {"entries", std::move(entries)}};
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
  try {
    DatasetManifest m;
    m.root = j.at("root").get<std::string>();
    m.split_seed = j.at("split_seed").get<std::uint64_t>();
    m.source = j.at("source").get<std::string>();
    for (const auto& entry : j.at("entries")) {
      ManifestEntry e;
      e.path = entry.at("path").get<std::string>();
      e.label = parse_label(entry.at("label").get<std::string>());
      const auto& split = entry.at("split");
      if (!split.is_null()) e.split = parse_split(split.get<std::string>());
      m.entries.push_back(std::move(e));
    }
    canonicalize(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kFormat, std::string("malformed manifest: ") + e.what());
  }
}

void save_manifest(const DatasetManifest& manifest, const fs::path& file) {
  write_file_atomic(file, manifest_to_json(manifest).dump(2) + "\n");
}

DatasetManifest load_manifest(const fs::path& file) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(file));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kFormat, file.string() + ": " + e.what());
  }
  DatasetManifest m = manifest_from_json(j);
  if (m.root.is_relative()) {
    const fs::path base =
        file.has_parent_path() ? file.parent_path() : fs::path(".");
    m.root = (base / m.root).lexically_normal();
    // "dir/." normalizes to "dir/"; drop the trailing separator.
    if (!m.root.has_filename() && m.root.has_relative_path()) {
      m.root = m.root.parent_path();
    }
  }
  return m;
}

DatasetManifest scan_dataset(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(Errc::kIo, "dataset root is not a directory: " + root.string());
  }
  std::optional<fs::path> class_dirs[2];
  for (const auto& item : fs::directory_iterator(root)) {
    if (!item.is_directory()) continue;
    const std::string name = lowercase(item.path().filename().string());
    int slot = -1;
    if (name == "normal") slot = 0;
    if (name == "pneumonia") slot = 1;
    if (slot < 0) continue;
    if (class_dirs[slot]) {
      throw Error(Errc::kLayout, "more than one " + name + " directory in " +
                                     root.string());
    }
    class_dirs[slot] = item.path();
  }

  DatasetManifest manifest;
  manifest.root = root;
  manifest.source = "scan";
  for (int slot = 0; slot < 2; ++slot) {
    const Label label = slot == 0 ? Label::kNormal : Label::kPneumonia;
    if (!class_dirs[slot]) {
      throw Error(Errc::kLayout, "missing " +
                                     std::string(slot == 0 ? "NORMAL" : "PNEUMONIA") +
                                     " directory in " + root.string());
    }
    std::size_t count = 0;
    for (const auto& item : fs::recursive_directory_iterator(*class_dirs[slot])) {
      if (!item.is_regular_file() || !has_image_signature(item.path())) {
        continue;
      }
      manifest.entries.push_back(
          {item.path().lexically_relative(root).generic_string(), label,
           std::nullopt});
      ++count;
    }
    if (count == 0) {
      throw Error(Errc::kEmptyClass, "no images under " +
                                         class_dirs[slot]->string());
    }
  }
  canonicalize(manifest);
  return manifest;
}

std::array<std::size_t, 3> split_counts(std::size_t n,
                                        const SplitRatios& ratios) {
  const double r[3] = {ratios.train, ratios.val, ratios.test};
  for (const double x : r) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(Errc::kInvalidParameter, "split ratios must be positive");
    }
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw Error(Errc::kInvalidParameter, "split ratios must sum to 1");
  }

  std::array<std::size_t, 3> counts{};
  // Fractional parts are snapped to a 1e-9 grid so that products like
  // 10 * 0.15 tie exactly regardless of binary rounding.
  std::array<long long, 3> frac_key{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double quota = static_cast<double>(n) * r[i];
    double whole = std::floor(quota);
    double frac = quota - whole;
    if (frac > 1.0 - 1e-9) {
      whole += 1.0;
      frac = 0.0;
    }
    counts[i] = static_cast<std::size_t>(whole);
    frac_key[i] = std::llround(frac * 1e9);
    assigned += counts[i];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac_key[a] > frac_key[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[order[k % 3]];
  return counts;
}

DatasetManifest split_dataset(const DatasetManifest& manifest,
                              const SplitRatios& ratios, std::uint64_t seed) {
  DatasetManifest out = manifest;
  canonicalize(out);
  out.split_seed = seed;

  for (int cls = 0; cls < 2; ++cls) {
    const Label label = cls == 0 ? Label::kNormal : Label::kPneumonia;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
      if (out.entries[i].label == label) members.push_back(i);
    }
    if (members.size() < 3) {
      throw Error(Errc::kInsufficientData,
                  std::string("class ") + std::string(label_name(label)) +
                      " has " + std::to_string(members.size()) +
                      " entries; at least 3 are needed to split");
    }
    const auto counts = split_counts(members.size(), ratios);

    RandomStream stream(seed, static_cast<std::uint64_t>(cls));
    for (std::size_t i = members.size() - 1; i > 0; --i) {
      std::swap(members[i], members[stream.next_below(i + 1)]);
    }
    std::size_t pos = 0;
    for (int s = 0; s < 3; ++s) {
      for (std::size_t k = 0; k < counts[s]; ++k, ++pos) {
        out.entries[members[pos]].split = static_cast<Split>(s);
      }
    }
  }
  return out;
}

DatasetManifest generate_synthetic(const SyntheticOptions& options,
                                   const fs::path& out_dir) {
  if (options.n_per_class == 0) {
    throw Error(Errc::kInvalidParameter, "n_per_class must be positive");
  }
  if (options.image_size < 8) {
    throw Error(Errc::kInvalidParameter, "image_size must be at least 8");
  }
  std::error_code ec;
  for (const char* dir : {"NORMAL", "PNEUMONIA"}) {
    fs::create_directories(out_dir / dir, ec);
    if (ec) {
      throw Error(Errc::kIo, "cannot create " + (out_dir / dir).string() +
                                 ": " + ec.message());
    }
  }

  DatasetManifest manifest;
  manifest.root = out_dir;
  manifest.source = "synthetic n_per_class=" +
                    std::to_string(options.n_per_class) +
                    " size=" + std::to_string(options.image_size) +
                    " seed=" + std::to_string(options.seed);
  const std::size_t total = 2 * static_cast<std::size_t>(options.n_per_class);
  manifest.entries.resize(total);

  parallel_for(total, [&](std::size_t k) {
    const bool pneumonia = k >= options.n_per_class;
    const std::uint64_t i = pneumonia ? k - options.n_per_class : k;
    const Label label = pneumonia ? Label::kPneumonia : Label::kNormal;
    char name[64];
    std::snprintf(name, sizeof(name), "%s/%s_%04llu.png",
                  pneumonia ? "PNEUMONIA" : "NORMAL",
                  pneumonia ? "pneumonia" : "normal",
                  static_cast<unsigned long long>(i));
    RandomStream stream(options.seed,
                        (static_cast<std::uint64_t>(pneumonia) << 32) | i);
    write_png(render_synthetic(label, options.image_size, stream),
              out_dir / name);
    manifest.entries[k] = {name, label, std::nullopt};
  });
  canonicalize(manifest);
  return manifest;
}

nlohmann::json provenance_to_json(const PerturbationProvenance& p) {
  return {{"beta", p.beta},
          {"epsilon_per_pixel", number_or_inf(p.epsilon_per_pixel)},
          {"epsilon_naive_total", number_or_inf(p.epsilon_naive_total)},
          {"sensitivity", p.sensitivity},
          {"master_seed", p.master_seed},
          {"clamp", p.clamp},
          {"format", format_name(p.format)},
          {"source_manifest_digest", p.source_manifest_digest}};
}

PerturbationProvenance provenance_from_json(const nlohmann::json& j) {
  try {
    PerturbationProvenance p;
    p.beta = j.at("beta").get<double>();
    p.epsilon_per_pixel = number_or_inf(j.at("epsilon_per_pixel"));
    p.epsilon_naive_total = number_or_inf(j.at("epsilon_naive_total"));
    p.sensitivity = j.at("sensitivity").get<double>();
    p.master_seed = j.at("master_seed").get<std::uint64_t>();
    p.clamp = j.at("clamp").get<bool>();
    p.format = parse_format(j.at("format").get<std::string>());
    p.source_manifest_digest = j.at("source_manifest_digest").get<std::string>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kFormat, std::string("malformed provenance: ") + e.what());
  }
}

PerturbationProvenance load_provenance(const fs::path& dataset_dir) {
  const fs::path file = dataset_dir / kProvenanceFileName;
  try {
    return provenance_from_json(nlohmann::json::parse(read_text_file(file)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kFormat, file.string() + ": " + e.what());
  }
}

MaterializedDataset materialize_perturbed(const DatasetManifest& manifest,
                                          const MaterializeOptions& options,
                                          const fs::path& out_dir) {
  DatasetManifest source = manifest;
  canonicalize(source);
  if (source.entries.empty()) {
    throw Error(Errc::kInvalidInput, "manifest has no entries");
  }
  if (options.target_size == 0) {
    throw Error(Errc::kInvalidParameter, "target size must be positive");
  }
  const PrivacyBudget budget = PrivacyBudget::from_beta(options.beta);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw Error(Errc::kIo,
                "cannot create " + out_dir.string() + ": " + ec.message());
  }
  // A stale sidecar would mark a half-rewritten tree as complete.
  fs::remove(out_dir / kProvenanceFileName, ec);

  std::vector<fs::path> outputs;
  outputs.reserve(source.entries.size());
  for (const ManifestEntry& e : source.entries) {
    outputs.push_back(output_relative_path(e.path, options.format));
    fs::create_directories((out_dir / outputs.back()).parent_path(), ec);
    if (ec) {
      throw Error(Errc::kIo, "cannot create directory for " +
                                 (out_dir / outputs.back()).string());
    }
  }

  parallel_for(
      source.entries.size(),
      [&](std::size_t index) {
        const fs::path input = source.root / source.entries[index].path;
        try {
          const ImageTensor clean =
              load_and_preprocess(input, options.target_size);
          const ImageTensor noisy =
              perturb_image(clean, options.beta, options.master_seed, index,
                            options.clamp);
          write_tensor(noisy, out_dir / outputs[index], options.format);
        } catch (const Error& e) {
          throw Error(e.code(), "while materializing " + input.string() +
                                    ": " + e.what());
        }
      },
      options.threads);

  PerturbationProvenance provenance;
  provenance.beta = options.beta;
  provenance.sensitivity = budget.sensitivity();
  provenance.epsilon_per_pixel = budget.epsilon();
  provenance.epsilon_naive_total =
      budget.is_unperturbed()
          ? kInf
          : naive_composition(budget.epsilon(),
                              static_cast<std::uint64_t>(options.target_size) *
                                  options.target_size);
  provenance.master_seed = options.master_seed;
  provenance.clamp = options.clamp;
  provenance.format = options.format;
  provenance.source_manifest_digest = manifest_digest(source);

  DatasetManifest result;
  result.root = ".";
  result.split_seed = source.split_seed;
  result.source = "laplace perturbation of manifest sha256:" +
                  provenance.source_manifest_digest +
                  "; beta=" + shortest(options.beta) +
                  "; sensitivity=1 per pixel; resize=bilinear half-pixel "
                  "edge-clamped to " +
                  std::to_string(options.target_size) + "x" +
                  std::to_string(options.target_size) +
                  "; split before perturbation; clamp=" +
                  (options.clamp ? "true" : "false") +
                  "; format=" + std::string(format_name(options.format));
  for (std::size_t i = 0; i < source.entries.size(); ++i) {
    result.entries.push_back({outputs[i].generic_string(),
                              source.entries[i].label,
                              source.entries[i].split});
  }
  canonicalize(result);
  save_manifest(result, out_dir / kManifestFileName);
  write_file_atomic(out_dir / kProvenanceFileName,
                    provenance_to_json(provenance).dump(2) + "\n");

  result.root = out_dir;
  return {std::move(result), provenance};
}

std::vector<double> pooled_residuals(const DatasetManifest& source,
                                     const fs::path& perturbed_dir) {
  const PerturbationProvenance provenance = load_provenance(perturbed_dir);
  if (provenance.format != ExportFormat::kF32Raw || provenance.clamp) {
    throw Error(Errc::kInvalidParameter,
                "residuals need an unclamped f32raw materialization");
  }
  DatasetManifest sorted = source;
  canonicalize(sorted);
  if (manifest_digest(sorted) != provenance.source_manifest_digest) {
    throw Error(Errc::kInvalidInput,
                "perturbed tree was not materialized from this manifest");
  }

  std::vector<double> residuals;
  for (const ManifestEntry& e : sorted.entries) {
    const ImageTensor noisy =
        read_tensor(perturbed_dir / output_relative_path(e.path, provenance.format));
    const ImageTensor clean = load_and_preprocess(sorted.root / e.path, noisy.height);
    if (clean.size() != noisy.size()) {
      throw Error(Errc::kInvalidInput, "shape mismatch for " + e.path);
    }
    for (std::size_t i = 0; i < clean.values.size(); ++i) {
      residuals.push_back(static_cast<double>(noisy.values[i]) -
                          static_cast<double>(clean.values[i]));
    }
  }
  return residuals;
}

}  // namespace ldp
