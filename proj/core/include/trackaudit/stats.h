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

#ifndef TRACKAUDIT_STATS_H_
#define TRACKAUDIT_STATS_H_

#include <cstdint>
#include <span>

#include "absl/status/statusor.h"

namespace trackaudit {

struct MannWhitneyResult {
  double u = 0.0;  // U of the first sample: #(x > y) + 0.5 #(x == y)
  double z = 0.0;
  double p_value = 1.0;  // two-sided
};

// Normal approximation with tie correction and a 0.5 continuity
// correction. When every value is tied the variance is zero and p = 1.
absl::StatusOr<MannWhitneyResult> MannWhitneyU(std::span<const double> x,
                                               std::span<const double> y);

double Mean(std::span<const double> v);

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
};

// Percentile bootstrap for mean(post) - mean(baseline), resampling each
// sample independently. Deterministic in `seed`.
absl::StatusOr<ConfidenceInterval> BootstrapDeltaCI(
    std::span<const double> baseline, std::span<const double> post,
    int resamples, std::uint64_t seed, double level = 0.95);

}  // namespace trackaudit

#endif  // TRACKAUDIT_STATS_H_
