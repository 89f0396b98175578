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

#include "ldp/error.hpp"

namespace ldp {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidParameter:
      return "invalid parameter";
    case Errc::kDomain:
      return "domain error";
    case Errc::kInvalidInput:
      return "invalid input";
    case Errc::kInsufficientData:
      return "insufficient data";
    case Errc::kIo:
      return "I/O error";
    case Errc::kFormat:
      return "format error";
    case Errc::kLayout:
      return "layout error";
    case Errc::kEmptyClass:
      return "empty class";
    case Errc::kHarnessFailure:
      return "harness failure";
    case Errc::kContractViolation:
      return "contract violation";
  }
  return "unknown error";
}

}  // namespace ldp
