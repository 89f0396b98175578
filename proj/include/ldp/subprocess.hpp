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

#ifndef LDP_SUBPROCESS_HPP_
#define LDP_SUBPROCESS_HPP_

#include <string>
#include <vector>

namespace ldp {

struct ProcessResult {
  int exit_code = -1;  // 128 + signal number if the child was killed
  std::string output;  // stdout and stderr, interleaved
};

// Runs argv[0] (resolved through PATH) with the given arguments, no shell.
// A command that cannot be executed reports exit code 127.
ProcessResult run_process(const std::vector<std::string>& argv);

}  // namespace ldp

#endif  // LDP_SUBPROCESS_HPP_
