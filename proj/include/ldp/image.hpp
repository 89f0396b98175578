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

#ifndef LDP_IMAGE_HPP_
#define LDP_IMAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace ldp {

// Decoded 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
struct ByteImage {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t channels = 1;
  std::vector<std::uint8_t> pixels;
};

// Normalized single-channel image, row-major. Values are in [0, 1] after
// preprocessing; perturbed tensors may leave that range unless clamped.
struct ImageTensor {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t channels = 1;
  std::vector<float> values;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(height) * width * channels;
  }
  bool operator==(const ImageTensor&) const = default;
};

enum class ExportFormat { kPng8, kF32Raw };

std::string_view format_name(ExportFormat format) noexcept;
ExportFormat parse_format(std::string_view name);
// File extension including the dot: ".png" or ".ldpt".
std::string_view format_extension(ExportFormat format) noexcept;

// PNG (8-bit gray or RGB, alpha dropped) or baseline JPEG. Detection is by
// file signature, not extension.
ByteImage decode_image(const std::filesystem::path& path);
bool has_image_signature(const std::filesystem::path& path);

void write_png(const ByteImage& image, const std::filesystem::path& path);

// BT.601 luminance, bilinear resize to target_size x target_size with
// half-pixel centers and edge clamping, then division by 255. Interpolation
// runs on the unrounded luminance.
ImageTensor preprocess(const ByteImage& image, std::uint32_t target_size);
ImageTensor load_and_preprocess(const std::filesystem::path& path,
                                std::uint32_t target_size);

// Laplace mechanism with sensitivity 1 on every pixel, noise drawn from
// RandomStream(master_seed, image_index) in row-major order, then an
// optional clamp to [0, 1]. beta == 0 returns the input unchanged.
ImageTensor perturb_image(const ImageTensor& image, double beta,
                          std::uint64_t master_seed, std::uint64_t image_index,
                          bool clamp);

// round(clamp(v, 0, 1) * 255), ties to even.
ByteImage quantize_u8(const ImageTensor& image);

/*
 * f32raw container, little-endian:
 *   "LDPT" | u16 version (1) | u32 height | u32 width | u32 channels |
 *   height * width * channels IEEE-754 binary32 values, row-major.
 */
std::vector<std::uint8_t> encode_f32raw(const ImageTensor& image);
ImageTensor decode_f32raw(std::span<const std::uint8_t> bytes);

void write_tensor(const ImageTensor& image, const std::filesystem::path& path,
                  ExportFormat format);
// Reads an f32raw container bit-exactly, or a PNG/JPEG as luminance / 255
// without resizing.
ImageTensor read_tensor(const std::filesystem::path& path);

}  // namespace ldp

#endif  // LDP_IMAGE_HPP_
