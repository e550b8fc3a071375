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

#include "trackaudit/rng.h"

#include <numeric>
#include <utility>

namespace trackaudit {
namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

}  // namespace

std::uint64_t CounterRng::Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::HashString(std::string_view s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t CounterRng::DeriveKey(std::uint64_t seed, std::string_view stream,
                                    std::uint64_t index) {
  std::uint64_t k = Mix(seed + kGoldenGamma);
  k = Mix(k ^ HashString(stream));
  k = Mix(k ^ (index * kGoldenGamma + 0x632be59bd9b4e019ULL));
  return k;
}

std::uint64_t CounterRng::Next() {
  ++counter_;
  return Mix(key_ + counter_ * kGoldenGamma);
}

std::uint64_t CounterRng::UniformInt(std::uint64_t bound) {
  // Reject the low (2^64 mod bound) values so every residue is equally
  // likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = Next();
    if (r >= threshold) return r % bound;
  }
}

std::int64_t CounterRng::UniformInt(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(Next());  // full range
  return lo + static_cast<std::int64_t>(UniformInt(span));
}

double CounterRng::UniformDouble() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

double CounterRng::Uniform(double lo, double hi) {
  return lo + (hi - lo) * UniformDouble();
}

std::vector<std::size_t> SamplePermutationPrefix(std::size_t population,
                                                 std::size_t n,
                                                 CounterRng& rng) {
  if (n > population) n = population;
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.UniformInt(population - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return idx;
}

}  // namespace trackaudit
