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

// PNG and JPEG decoding via libpng's simplified API and libjpeg.

#include <png.h>

#include <array>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include <jpeglib.h>
#include <jerror.h>

#include "ldp/error.hpp"
#include "ldp/image.hpp"

namespace ldp {
namespace {

enum class Signature { kUnknown, kPng, kJpeg };

constexpr std::array<std::uint8_t, 8> kPngMagic = {0x89, 'P',  'N',  'G',
                                                   '\r', '\n', 0x1A, '\n'};

Signature sniff(const std::filesystem::path& path, bool throw_on_io) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (throw_on_io) {
      throw Error(Errc::kIo, "cannot open " + path.string());
    }
    return Signature::kUnknown;
  }
  std::array<std::uint8_t, 8> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got >= 8 && head == kPngMagic) return Signature::kPng;
  if (got >= 3 && head[0] == 0xFF && head[1] == 0xD8 && head[2] == 0xFF) {
    return Signature::kJpeg;
  }
  return Signature::kUnknown;
}

ByteImage decode_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&image, path.c_str()) == 0) {
    throw Error(Errc::kFormat, path.string() + ": " + image.message);
  }
  ByteImage out;
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  out.height = image.height;
  out.width = image.width;
  out.channels = color ? 3 : 1;
  if (out.height == 0 || out.width == 0) {
    png_image_free(&image);
    throw Error(Errc::kInvalidInput, path.string() + ": zero-dimension image");
  }
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr) ==
      0) {
    throw Error(Errc::kFormat, path.string() + ": " + image.message);
  }
  return out;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Warnings stay quiet, except premature end of data: libjpeg would pad the
// missing rows with gray and report success.
void jpeg_emit_message(j_common_ptr cinfo, int msg_level) {
  if (msg_level < 0 && cinfo->err->msg_code == JWRN_JPEG_EOF) {
    jpeg_error_exit(cinfo);
  }
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};

// Only trivially destructible locals may be introduced inside the setjmp
// branch; longjmp skips destructors.
ByteImage decode_jpeg(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(Errc::kIo, "cannot open " + path.string());

  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.emit_message = jpeg_emit_message;
  ByteImage out;
  std::string failure;

  if (setjmp(err.jump)) {
    failure = err.message;
  } else {
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, file.get());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space =
        cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);
    out.width = cinfo.output_width;
    out.height = cinfo.output_height;
    out.channels = static_cast<std::uint32_t>(cinfo.output_components);
    out.pixels.resize(static_cast<std::size_t>(out.width) * out.height *
                      out.channels);
    while (cinfo.output_scanline < cinfo.output_height) {
      JSAMPROW row = out.pixels.data() +
                     static_cast<std::size_t>(cinfo.output_scanline) *
                         out.width * out.channels;
      jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
  }
  jpeg_destroy_decompress(&cinfo);
  if (!failure.empty()) {
    throw Error(Errc::kFormat, path.string() + ": " + failure);
  }
  if (out.height == 0 || out.width == 0) {
    throw Error(Errc::kInvalidInput, path.string() + ": zero-dimension image");
  }
  return out;
}

}  // namespace

bool has_image_signature(const std::filesystem::path& path) {
  return sniff(path, false) != Signature::kUnknown;
}

ByteImage decode_image(const std::filesystem::path& path) {
  switch (sniff(path, true)) {
    case Signature::kPng:
      return decode_png(path);
    case Signature::kJpeg:
      return decode_jpeg(path);
    case Signature::kUnknown:
      break;
  }
  throw Error(Errc::kFormat, path.string() + ": not a PNG or JPEG file");
}

void write_png(const ByteImage& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(Errc::kInvalidInput, "PNG export supports 1 or 3 channels");
  }
  if (image.pixels.size() !=
      static_cast<std::size_t>(image.height) * image.width * image.channels) {
    throw Error(Errc::kInvalidInput, "pixel buffer does not match shape");
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = image.width;
  png.height = image.height;
  png.format = image.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (png_image_write_to_file(&png, path.c_str(), 0, image.pixels.data(), 0,
                              nullptr) == 0) {
    throw Error(Errc::kIo, path.string() + ": " + png.message);
  }
}

}  // namespace ldp
