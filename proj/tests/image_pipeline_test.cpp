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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "ldp/error.hpp"
#include "ldp/image.hpp"
#include "sha256_util.hpp"
#include "test_util.hpp"

using ldp::ByteImage;
using ldp::Errc;
using ldp::ExportFormat;
using ldp::ImageTensor;
using ldp::testing::TempDir;

namespace {

const std::filesystem::path kData = LDP_TEST_DATA_DIR;

// SHA-256 of the LDPT encoding of checkerboard.png preprocessed to 32x32,
// produced by the float64 NumPy pipeline in tests/oracles/preprocess_oracle.py.
constexpr const char* kCheckerboardGolden =
    "19a84b9eb43e78a3316329d6d5e05bf764d95d9759779ad4662c9b27368d5988";

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const ldp::Error& e) {
    return e.code();
  }
  FAIL("expected ldp::Error");
  return Errc::kIo;
}

ByteImage solid(std::uint32_t h, std::uint32_t w, std::uint32_t c,
                std::uint8_t value) {
  return {h, w, c, std::vector<std::uint8_t>(std::size_t{h} * w * c, value)};
}

ImageTensor ramp_tensor(std::uint32_t size) {
  ImageTensor t{size, size, 1, {}};
  t.values.resize(t.size());
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    t.values[i] = static_cast<float>(i % 251) / 250.0f;
  }
  return t;
}

}  // namespace

TEST_SUITE("image_pipeline") {
  TEST_CASE("white 512x512 becomes all ones at 256x256") {
    const auto t = ldp::preprocess(solid(512, 512, 3, 255), 256);
    CHECK(t.height == 256);
    CHECK(t.width == 256);
    CHECK(t.channels == 1);
    CHECK(t.values.size() == 65536);
    CHECK(std::all_of(t.values.begin(), t.values.end(),
                      [](float v) { return v == 1.0f; }));
  }

  TEST_CASE("uniform gray 128 maps to 128/255") {
    const auto g = ldp::preprocess(solid(300, 200, 1, 128), 256);
    CHECK(std::all_of(g.values.begin(), g.values.end(), [](float v) {
      return v == static_cast<float>(128.0 / 255.0);
    }));
    const auto rgb = ldp::preprocess(solid(64, 64, 3, 128), 256);
    CHECK(std::all_of(rgb.values.begin(), rgb.values.end(), [](float v) {
      return std::abs(v - 128.0 / 255.0) < 1e-6;
    }));
  }

  TEST_CASE("luma weights") {
    ByteImage px{1, 3, 3, {255, 0, 0, 0, 255, 0, 0, 0, 255}};
    const auto t = ldp::preprocess(px, 3);
    // Nearest-sample columns at 3 -> 3: s = x exactly.
    CHECK(t.values[0] == doctest::Approx(0.299).epsilon(1e-6));
    CHECK(t.values[1] == doctest::Approx(0.587).epsilon(1e-6));
    CHECK(t.values[2] == doctest::Approx(0.114).epsilon(1e-6));
  }

  TEST_CASE("2x upsampling follows half-pixel-center bilinear weights") {
    // Source [[0, 255], [255, 0]]; destination taps land at 0, 1/4, 3/4, 1.
    const ByteImage src{2, 2, 1, {0, 255, 255, 0}};
    const auto t = ldp::preprocess(src, 4);
    const double f[4] = {0.0, 0.25, 0.75, 1.0};
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 4; ++x) {
        const double expected = f[x] * (1 - f[y]) + (1 - f[x]) * f[y];
        CHECK(t.values[y * 4 + x] == doctest::Approx(expected).epsilon(1e-7));
      }
    }
  }

  TEST_CASE("2x downsampling averages each 2x2 block") {
    ByteImage src{512, 512, 1, {}};
    src.pixels.resize(512 * 512);
    for (std::size_t i = 0; i < src.pixels.size(); ++i) {
      src.pixels[i] = static_cast<std::uint8_t>((i * 2654435761u) >> 24);
    }
    const auto t = ldp::preprocess(src, 256);
    double worst = 0.0;
    for (int y = 0; y < 256; ++y) {
      for (int x = 0; x < 256; ++x) {
        const auto at = [&](int r, int c) { return src.pixels[r * 512 + c]; };
        const double mean = (at(2 * y, 2 * x) + at(2 * y, 2 * x + 1) +
                             at(2 * y + 1, 2 * x) + at(2 * y + 1, 2 * x + 1)) /
                            4.0 / 255.0;
        worst = std::max(worst, std::abs(t.values[y * 256 + x] - mean));
      }
    }
    CHECK(worst < 1e-6);
  }

  TEST_CASE("golden checksum for the checkerboard fixture") {
    const auto t = ldp::load_and_preprocess(kData / "checkerboard.png", 32);
    CHECK(t.height == 32);
    CHECK(ldp::testing::sha256_hex(ldp::encode_f32raw(t)) == kCheckerboardGolden);
    CHECK(*std::min_element(t.values.begin(), t.values.end()) == 0.0f);
    CHECK(*std::max_element(t.values.begin(), t.values.end()) == 1.0f);
  }

  TEST_CASE("output is always 256x256 in [0, 1]") {
    for (const auto& [h, w] : {std::pair{1u, 1u}, std::pair{3u, 700u},
                               std::pair{256u, 256u}, std::pair{1000u, 17u}}) {
      ByteImage img{h, w, 3, {}};
      img.pixels.resize(std::size_t{h} * w * 3);
      for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        img.pixels[i] = static_cast<std::uint8_t>(i * 37);
      }
      const auto t = ldp::preprocess(img, 256);
      CHECK(t.size() == 65536);
      CHECK(std::all_of(t.values.begin(), t.values.end(),
                        [](float v) { return v >= 0.0f && v <= 1.0f; }));
    }
  }

  TEST_CASE("jpeg decode") {
    const auto img = ldp::decode_image(kData / "solid_green.jpg");
    CHECK(img.width == 30);
    CHECK(img.height == 20);
    CHECK(img.channels == 3);
    const std::uint8_t* p = img.pixels.data() + 3 * (10 * 30 + 15);
    CHECK(std::abs(p[0] - 9) <= 4);
    CHECK(std::abs(p[1] - 200) <= 4);
    CHECK(std::abs(p[2] - 60) <= 4);
    const auto t = ldp::load_and_preprocess(kData / "solid_green.jpg", 256);
    CHECK(t.size() == 65536);
    const double luma = (0.299 * 9 + 0.587 * 200 + 0.114 * 60) / 255.0;
    CHECK(std::abs(t.values[128 * 256 + 128] - luma) < 0.02);
  }

  TEST_CASE("png write and decode round-trip") {
    TempDir dir;
    ByteImage rgb{5, 7, 3, {}};
    rgb.pixels.resize(105);
    for (std::size_t i = 0; i < rgb.pixels.size(); ++i) {
      rgb.pixels[i] = static_cast<std::uint8_t>(i * 11);
    }
    ldp::write_png(rgb, dir / "rgb.png");
    const auto back = ldp::decode_image(dir / "rgb.png");
    CHECK(back.height == 5);
    CHECK(back.width == 7);
    CHECK(back.channels == 3);
    CHECK(back.pixels == rgb.pixels);

    const ByteImage gray{2, 3, 1, {0, 1, 2, 253, 254, 255}};
    ldp::write_png(gray, dir / "gray.png");
    const auto g = ldp::decode_image(dir / "gray.png");
    CHECK(g.channels == 1);
    CHECK(g.pixels == gray.pixels);
    CHECK(ldp::has_image_signature(dir / "gray.png"));
  }

  TEST_CASE("decode errors") {
    TempDir dir;
    CHECK(code_of([&] { ldp::decode_image(dir / "missing.png"); }) == Errc::kIo);
    ldp::testing::spit(dir / "notes.txt", "not an image at all");
    CHECK(code_of([&] { ldp::decode_image(dir / "notes.txt"); }) ==
          Errc::kFormat);
    CHECK_FALSE(ldp::has_image_signature(dir / "notes.txt"));
    const std::string png = ldp::testing::slurp(kData / "checkerboard.png");
    ldp::testing::spit(dir / "cut.png", png.substr(0, 60));
    CHECK(code_of([&] { ldp::decode_image(dir / "cut.png"); }) == Errc::kFormat);
    const std::string jpg = ldp::testing::slurp(kData / "solid_green.jpg");
    ldp::testing::spit(dir / "cut.jpg", jpg.substr(0, 40));
    CHECK(code_of([&] { ldp::decode_image(dir / "cut.jpg"); }) == Errc::kFormat);
    // Header intact, entropy-coded data cut short.
    ldp::testing::spit(dir / "short.jpg", jpg.substr(0, jpg.size() - 200));
    CHECK(code_of([&] { ldp::decode_image(dir / "short.jpg"); }) ==
          Errc::kFormat);
  }

  TEST_CASE("preprocess argument errors") {
    CHECK(code_of([] { ldp::preprocess(ByteImage{0, 4, 1, {}}, 8); }) ==
          Errc::kInvalidInput);
    CHECK(code_of([] { ldp::preprocess(solid(2, 2, 4, 0), 8); }) ==
          Errc::kInvalidInput);
    CHECK(code_of([] { ldp::preprocess(ByteImage{2, 2, 1, {1, 2, 3}}, 8); }) ==
          Errc::kInvalidInput);
    CHECK(code_of([] { ldp::preprocess(solid(2, 2, 1, 0), 0); }) ==
          Errc::kInvalidParameter);
  }

  TEST_CASE("beta = 0 leaves the tensor bit-identical") {
    const auto t = ramp_tensor(64);
    CHECK(ldp::perturb_image(t, 0.0, 1, 0, false) == t);
    CHECK(ldp::perturb_image(t, 0.0, 1, 0, true) == t);
  }

  TEST_CASE("beta = 2 residuals average 2 in absolute value") {
    const auto t = ldp::preprocess(solid(512, 512, 3, 255), 256);
    const auto p = ldp::perturb_image(t, 2.0, 17, 0, false);
    double sum = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      sum += std::abs(static_cast<double>(p.values[i]) - t.values[i]);
    }
    CHECK(std::abs(sum / t.values.size() - 2.0) <= 0.05);
  }

  TEST_CASE("noise is a function of (seed, image index)") {
    const auto t = ramp_tensor(32);
    const auto a = ldp::perturb_image(t, 1.0, 5, 3, false);
    CHECK(a == ldp::perturb_image(t, 1.0, 5, 3, false));
    const auto b = ldp::perturb_image(t, 1.0, 5, 4, false);
    const auto c = ldp::perturb_image(t, 1.0, 6, 3, false);
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      REQUIRE(a.values[i] != b.values[i]);
      REQUIRE(a.values[i] != c.values[i]);
    }
  }

  TEST_CASE("clamping is the elementwise clamp of the unclamped output") {
    const auto t = ramp_tensor(64);
    const auto raw = ldp::perturb_image(t, 0.5, 8, 1, false);
    const auto clamped = ldp::perturb_image(t, 0.5, 8, 1, true);
    bool any_outside = false;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      any_outside |= raw.values[i] < 0.0f || raw.values[i] > 1.0f;
      REQUIRE(clamped.values[i] == std::clamp(raw.values[i], 0.0f, 1.0f));
    }
    CHECK(any_outside);
  }

  TEST_CASE("perturbation rejects a tensor whose buffer mismatches its shape") {
    ImageTensor bad{4, 4, 1, std::vector<float>(15, 0.0f)};
    CHECK(code_of([&] { ldp::perturb_image(bad, 1.0, 0, 0, false); }) ==
          Errc::kInvalidInput);
    CHECK(code_of([&] { ldp::encode_f32raw(bad); }) == Errc::kInvalidInput);
  }

  TEST_CASE("8-bit quantization") {
    const ImageTensor t{1, 7, 1, {0.0f, 1.0f, 0.5f, -0.3f, 1.7f, 0.25f, 0.75f}};
    const auto q = ldp::quantize_u8(t);
    // 127.5, 63.75 and 191.25 are the scaled midpoints; halves round to even.
    CHECK(q.pixels == std::vector<std::uint8_t>{0, 255, 128, 0, 255, 64, 191});
  }

  TEST_CASE("quantization error is at most half a level after clamping") {
    const auto t = ldp::perturb_image(ramp_tensor(64), 0.3, 2, 2, false);
    const auto q = ldp::quantize_u8(t);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      const double c = std::clamp(static_cast<double>(t.values[i]), 0.0, 1.0);
      worst = std::max(worst, std::abs(q.pixels[i] / 255.0 - c));
    }
    CHECK(worst <= 1.0 / 510.0 + 1e-9);
  }

  TEST_CASE("f32raw layout and exact round-trip") {
    const ImageTensor t{2, 3, 1, {-1.5f, 0.0f, 1e-30f, 3.25f, -7e6f, 1.0f}};
    const auto bytes = ldp::encode_f32raw(t);
    REQUIRE(bytes.size() == 18 + 6 * 4);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "LDPT");
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 0);
    CHECK(bytes[6] == 2);
    CHECK(bytes[10] == 3);
    CHECK(bytes[14] == 1);
    // -1.5f is 0xbfc00000, stored little-endian.
    CHECK(bytes[18] == 0x00);
    CHECK(bytes[20] == 0xc0);
    CHECK(bytes[21] == 0xbf);
    CHECK(ldp::decode_f32raw(bytes) == t);

    TempDir dir;
    ldp::write_tensor(t, dir / "t.ldpt", ExportFormat::kF32Raw);
    CHECK(ldp::read_tensor(dir / "t.ldpt") == t);
  }

  TEST_CASE("f32raw decode errors") {
    auto bytes = ldp::encode_f32raw(ImageTensor{1, 2, 1, {0.5f, 0.25f}});
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK(code_of([&] { ldp::decode_f32raw(bad_magic); }) == Errc::kFormat);
    auto bad_version = bytes;
    bad_version[4] = 2;
    CHECK(code_of([&] { ldp::decode_f32raw(bad_version); }) == Errc::kFormat);
    auto truncated = bytes;
    truncated.pop_back();
    CHECK(code_of([&] { ldp::decode_f32raw(truncated); }) == Errc::kFormat);
    auto longer = bytes;
    longer.insert(longer.end(), 4, 0);
    CHECK(code_of([&] { ldp::decode_f32raw(longer); }) == Errc::kFormat);
    CHECK(code_of([&] { ldp::decode_f32raw(std::vector<std::uint8_t>(5)); }) ==
          Errc::kFormat);
  }

  TEST_CASE("png8 export stores the clamped, quantized tensor") {
    TempDir dir;
    const auto t = ldp::perturb_image(ramp_tensor(32), 0.2, 3, 0, false);
    ldp::write_tensor(t, dir / "t.png", ExportFormat::kPng8);
    const auto back = ldp::read_tensor(dir / "t.png");
    REQUIRE(back.size() == t.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      const double c = std::clamp(static_cast<double>(t.values[i]), 0.0, 1.0);
      worst = std::max(worst, std::abs(back.values[i] - c));
    }
    CHECK(worst <= 1.0 / 255.0);
    CHECK(worst <= 1.0 / 510.0 + 1e-6);
  }

  TEST_CASE("writing into a missing directory fails with an I/O error") {
    TempDir dir;
    const auto t = ramp_tensor(8);
    CHECK(code_of([&] {
            ldp::write_tensor(t, dir / "no/such/dir/t.ldpt", ExportFormat::kF32Raw);
          }) == Errc::kIo);
    CHECK(code_of([&] {
            ldp::write_tensor(t, dir / "no/such/dir/t.png", ExportFormat::kPng8);
          }) == Errc::kIo);
    CHECK(code_of([&] { ldp::read_tensor(dir / "absent.ldpt"); }) == Errc::kIo);
  }

  TEST_CASE("format names") {
    CHECK(ldp::parse_format("png8") == ExportFormat::kPng8);
    CHECK(ldp::parse_format("f32raw") == ExportFormat::kF32Raw);
    CHECK(ldp::format_name(ExportFormat::kPng8) == "png8");
    CHECK(ldp::format_extension(ExportFormat::kF32Raw) == ".ldpt");
    CHECK(code_of([] { ldp::parse_format("tiff"); }) == Errc::kInvalidParameter);
    CHECK(code_of([] { ldp::parse_format("PNG8"); }) == Errc::kInvalidParameter);
  }
}
