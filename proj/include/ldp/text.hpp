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

#ifndef LDP_TEXT_HPP_
#define LDP_TEXT_HPP_

#include <charconv>
#include <cmath>
#include <filesystem>
#include <string>
#include <string_view>
#include <system_error>

#include "ldp/error.hpp"

namespace ldp {

// Shortest decimal text that parses back to the same double; "inf" for
// +infinity. Used wherever output must be byte-stable.
inline std::string shortest(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

inline double parse_double(std::string_view text) {
  if (text == "inf") return HUGE_VAL;
  double value = 0.0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw Error(Errc::kInvalidParameter,
                "not a number: '" + std::string(text) + "'");
  }
  return value;
}

// Writes `contents` next to `target` and renames it into place.
void write_file_atomic(const std::filesystem::path& target,
                       std::string_view contents);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace ldp

#endif  // LDP_TEXT_HPP_
