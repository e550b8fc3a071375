// Copyright 2026 The Trackaudit Authors
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
//

#ifndef TRACKAUDIT_RNG_H_
#define TRACKAUDIT_RNG_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace trackaudit {

// Counter-based generator: the i-th output is SplitMix64's finalizer applied
// to key + (i + 1) * golden_gamma. Every draw is a pure function of
// (key, counter), so streams reproduce bit-for-bit on any platform. Keys
// are derived with DeriveKey(); never feed raw user seeds straight in.
//
// Versioned as "splitmix64-ctr/v1". Changing any constant or the order of
// draws in a consumer is a format break for archived runs.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view kAlgorithm = "splitmix64-ctr/v1";

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return Next(); }

  std::uint64_t Next();

  // Uniform on [0, bound). bound must be positive. Rejection sampling, so
  // the number of counter steps consumed varies.
  std::uint64_t UniformInt(std::uint64_t bound);

  // Uniform on the closed range [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);

  // 53-bit uniform on [0, 1).
  double UniformDouble();
  double Uniform(double lo, double hi);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  static std::uint64_t Mix(std::uint64_t z);
  // 64-bit FNV-1a.
  static std::uint64_t HashString(std::string_view s);
  // Key for an independent stream identified by (seed, stream name, index).
  static std::uint64_t DeriveKey(std::uint64_t seed, std::string_view stream,
                                 std::uint64_t index = 0);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// First `n` entries of a uniformly random permutation of [0, population),
// by partial Fisher-Yates. A longer prefix drawn from an identically keyed
// generator extends a shorter one.
std::vector<std::size_t> SamplePermutationPrefix(std::size_t population,
                                                 std::size_t n,
                                                 CounterRng& rng);

}  // namespace trackaudit

#endif  // TRACKAUDIT_RNG_H_
