// Copyright 2026 The wchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Counter-based random numbers: every draw is a pure function of
// (seed, realization, segment, slot), so results do not depend on how
// realizations are scheduled across threads.

#pragma once

#include <cstdint>

namespace wchain {

namespace detail {

/// SplitMix64 finaliser; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key and word enter asymmetrically, so (a, b) and (b, a) give different keys.
constexpr std::uint64_t combine(std::uint64_t key, std::uint64_t word) { return mix64(mix64(key) ^ word); }

}  // namespace detail

/// Random stream for one time segment of one realization.
class SegmentStream {
 public:
  constexpr SegmentStream(std::uint64_t seed, std::uint64_t realization, std::uint64_t segment)
      : key_(detail::combine(detail::combine(detail::mix64(seed), realization), segment)) {}

  /// 53-bit uniform in [0, 1).
  constexpr double unit(std::uint64_t slot) const {
    return static_cast<double>(detail::combine(key_, slot) >> 11) * 0x1.0p-53;
  }

  /// Uniform in [-1, 1).
  constexpr double symmetric(std::uint64_t slot) const { return 2.0 * unit(slot) - 1.0; }

  constexpr std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace wchain
