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

#ifndef LDP_RANDOM_STREAM_HPP_
#define LDP_RANDOM_STREAM_HPP_

#include <array>
#include <cstdint>

namespace ldp {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3", SC11). Matches the Random123 known-answer vectors.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Reproducible stream of uniform variates addressed by
/// (master_seed, stream_id).
///
/// The generator is Philox4x32-10 keyed by master_seed. Counter words 0-1
/// hold the block index and words 2-3 hold stream_id, so every stream owns a
/// disjoint 2^64-block slice of the counter space. Each block yields two
/// 64-bit words; each word is one draw. The output depends only on integer
/// arithmetic and is identical on every platform.
///
/// Not cryptographically secure. A stream is single-owner; parallel work
/// derives one stream per work item instead of sharing.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept;

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  // Number of draws consumed so far.
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next_u64() noexcept;

  // Uniform in the open interval (0, 1) with 53 bits of precision:
  // (k + 0.5) * 2^-53 for k uniform in [0, 2^53).
  double next_uniform() noexcept;

  // Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) noexcept;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> block_{};
};

}  // namespace ldp

#endif  // LDP_RANDOM_STREAM_HPP_
