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

#include "ldp/image.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "ldp/error.hpp"
#include "ldp/mechanism.hpp"

namespace ldp {
namespace {

constexpr std::array<std::uint8_t, 4> kF32RawMagic = {'L', 'D', 'P', 'T'};
constexpr std::uint16_t kF32RawVersion = 1;
constexpr std::size_t kF32RawHeaderSize = 4 + 2 + 3 * 4;

std::uint8_t* put_u16(std::uint8_t* out, std::uint16_t v) {
  *out++ = static_cast<std::uint8_t>(v);
  *out++ = static_cast<std::uint8_t>(v >> 8);
  return out;
}

std::uint8_t* put_u32(std::uint8_t* out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    *out++ = static_cast<std::uint8_t>(v >> shift);
  }
  return out;
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  return static_cast<std::uint32_t>(bytes[at]) |
         (static_cast<std::uint32_t>(bytes[at + 1]) << 8) |
         (static_cast<std::uint32_t>(bytes[at + 2]) << 16) |
         (static_cast<std::uint32_t>(bytes[at + 3]) << 24);
}

std::vector<double> luminance(const ByteImage& image) {
  const std::size_t n = static_cast<std::size_t>(image.height) * image.width;
  std::vector<double> out(n);
  const std::uint8_t* p = image.pixels.data();
  if (image.channels == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = p[i];
  } else {
    // BT.601 luma weights.
    for (std::size_t i = 0; i < n; ++i, p += 3) {
      out[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
  }
  return out;
}

struct Tap {
  std::uint32_t lo;
  std::uint32_t hi;
  double frac;
};

// Half-pixel-center source coordinate, clamped to the edge samples.
Tap source_tap(std::uint32_t dst, std::uint32_t src_extent,
               std::uint32_t dst_extent) {
  double s = (static_cast<double>(dst) + 0.5) * src_extent / dst_extent - 0.5;
  s = std::clamp(s, 0.0, static_cast<double>(src_extent - 1));
  const auto lo = static_cast<std::uint32_t>(std::floor(s));
  const std::uint32_t hi = std::min(lo + 1, src_extent - 1);
  return {lo, hi, s - lo};
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string_view format_name(ExportFormat format) noexcept {
  return format == ExportFormat::kPng8 ? "png8" : "f32raw";
}

ExportFormat parse_format(std::string_view name) {
  if (name == "png8") return ExportFormat::kPng8;
  if (name == "f32raw") return ExportFormat::kF32Raw;
  throw Error(Errc::kInvalidParameter,
              "unknown export format '" + std::string(name) + "'");
}

std::string_view format_extension(ExportFormat format) noexcept {
  return format == ExportFormat::kPng8 ? ".png" : ".ldpt";
}

ImageTensor preprocess(const ByteImage& image, std::uint32_t target_size) {
  if (image.height == 0 || image.width == 0) {
    throw Error(Errc::kInvalidInput, "zero-dimension image");
  }
  if (image.channels != 1 && image.channels != 3) {
    throw Error(Errc::kInvalidInput, "expected 1 or 3 channels");
  }
  if (image.pixels.size() !=
      static_cast<std::size_t>(image.height) * image.width * image.channels) {
    throw Error(Errc::kInvalidInput, "pixel buffer does not match shape");
  }
  if (target_size == 0) {
    throw Error(Errc::kInvalidParameter, "target size must be positive");
  }

  const std::vector<double> luma = luminance(image);
  const std::size_t stride = image.width;
  std::vector<Tap> cols(target_size);
  for (std::uint32_t x = 0; x < target_size; ++x) {
    cols[x] = source_tap(x, image.width, target_size);
  }

  ImageTensor out;
  out.height = target_size;
  out.width = target_size;
  out.channels = 1;
  out.values.resize(static_cast<std::size_t>(target_size) * target_size);
  for (std::uint32_t y = 0; y < target_size; ++y) {
    const Tap row = source_tap(y, image.height, target_size);
    const double* top = luma.data() + row.lo * stride;
    const double* bottom = luma.data() + row.hi * stride;
    for (std::uint32_t x = 0; x < target_size; ++x) {
      const Tap& c = cols[x];
      const double upper = top[c.lo] + c.frac * (top[c.hi] - top[c.lo]);
      const double lower =
          bottom[c.lo] + c.frac * (bottom[c.hi] - bottom[c.lo]);
      const double value = upper + row.frac * (lower - upper);
      out.values[static_cast<std::size_t>(y) * target_size + x] =
          static_cast<float>(std::clamp(value / 255.0, 0.0, 1.0));
    }
  }
  return out;
}

ImageTensor load_and_preprocess(const std::filesystem::path& path,
                                std::uint32_t target_size) {
  return preprocess(decode_image(path), target_size);
}

ImageTensor perturb_image(const ImageTensor& image, double beta,
                          std::uint64_t master_seed, std::uint64_t image_index,
                          bool clamp) {
  if (image.values.size() != image.size()) {
    throw Error(Errc::kInvalidInput, "tensor values do not match shape");
  }
  const PrivacyBudget budget = PrivacyBudget::from_beta(beta);
  std::vector<double> work(image.values.begin(), image.values.end());
  RandomStream stream(master_seed, image_index);
  perturb_in_place(work, budget, stream);

  ImageTensor out;
  out.height = image.height;
  out.width = image.width;
  out.channels = image.channels;
  out.values.resize(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    const double v = clamp ? std::clamp(work[i], 0.0, 1.0) : work[i];
    out.values[i] = static_cast<float>(v);
  }
  return out;
}

ByteImage quantize_u8(const ImageTensor& image) {
  ByteImage out;
  out.height = image.height;
  out.width = image.width;
  out.channels = image.channels;
  out.pixels.resize(image.values.size());
  for (std::size_t i = 0; i < image.values.size(); ++i) {
    const double v = std::clamp(static_cast<double>(image.values[i]), 0.0, 1.0);
    // nearbyint honors the default round-to-nearest-even mode.
    out.pixels[i] = static_cast<std::uint8_t>(std::nearbyint(v * 255.0));
  }
  return out;
}

std::vector<std::uint8_t> encode_f32raw(const ImageTensor& image) {
  if (image.values.size() != image.size()) {
    throw Error(Errc::kInvalidInput, "tensor values do not match shape");
  }
  std::vector<std::uint8_t> out(kF32RawHeaderSize + image.values.size() * 4);
  std::uint8_t* p = std::copy(kF32RawMagic.begin(), kF32RawMagic.end(), out.data());
  p = put_u16(p, kF32RawVersion);
  p = put_u32(p, image.height);
  p = put_u32(p, image.width);
  p = put_u32(p, image.channels);
  for (const float v : image.values) p = put_u32(p, std::bit_cast<std::uint32_t>(v));
  return out;
}

ImageTensor decode_f32raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kF32RawHeaderSize ||
      !std::equal(kF32RawMagic.begin(), kF32RawMagic.end(), bytes.begin())) {
    throw Error(Errc::kFormat, "missing LDPT header");
  }
  const auto version = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
  if (version != kF32RawVersion) {
    throw Error(Errc::kFormat,
                "unsupported LDPT version " + std::to_string(version));
  }
  ImageTensor out;
  out.height = get_u32(bytes, 6);
  out.width = get_u32(bytes, 10);
  out.channels = get_u32(bytes, 14);
  const std::size_t n = out.size();
  if (n == 0 || (bytes.size() - kF32RawHeaderSize) / 4 != n ||
      (bytes.size() - kF32RawHeaderSize) % 4 != 0) {
    throw Error(Errc::kFormat, "LDPT payload does not match its header");
  }
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] =
        std::bit_cast<float>(get_u32(bytes, kF32RawHeaderSize + 4 * i));
  }
  return out;
}

void write_tensor(const ImageTensor& image, const std::filesystem::path& path,
                  ExportFormat format) {
  if (format == ExportFormat::kPng8) {
    write_png(quantize_u8(image), path);
    return;
  }
  const std::vector<std::uint8_t> bytes = encode_f32raw(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIo, "write failed for " + path.string());
}

ImageTensor read_tensor(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  if (bytes.size() >= 4 &&
      std::equal(kF32RawMagic.begin(), kF32RawMagic.end(), bytes.begin())) {
    try {
      return decode_f32raw(bytes);
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
  }
  const ByteImage raw = decode_image(path);
  const std::vector<double> luma = luminance(raw);
  ImageTensor out;
  out.height = raw.height;
  out.width = raw.width;
  out.values.resize(luma.size());
  for (std::size_t i = 0; i < luma.size(); ++i) {
    out.values[i] = static_cast<float>(luma[i] / 255.0);
  }
  return out;
}

}  // namespace ldp
