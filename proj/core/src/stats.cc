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

#include "trackaudit/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "trackaudit/rng.h"

namespace trackaudit {

double Mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

absl::StatusOr<MannWhitneyResult> MannWhitneyU(std::span<const double> x,
                                               std::span<const double> y) {
  if (x.empty() || y.empty()) {
    return absl::InvalidArgumentError("Mann-Whitney needs two non-empty samples");
  }
  const std::size_t n1 = x.size(), n2 = y.size(), n = n1 + n2;
  std::vector<std::pair<double, bool>> all;  // value, from x
  all.reserve(n);
  for (double v : x) all.emplace_back(v, true);
  for (double v : y) all.emplace_back(v, false);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double rank_sum_x = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && all[j].first == all[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second) rank_sum_x += avg_rank;
    }
    tie_term += t * t * t - t;
    i = j;
  }
  const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2);
  const double dn = static_cast<double>(n);
  MannWhitneyResult r;
  r.u = rank_sum_x - dn1 * (dn1 + 1.0) / 2.0;
  const double mu = dn1 * dn2 / 2.0;
  const double var =
      dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(var > 0.0)) {
    r.z = 0.0;
    r.p_value = 1.0;
    return r;
  }
  const double sd = std::sqrt(var);
  const double diff = r.u - mu;
  const double corrected = std::max(0.0, std::abs(diff) - 0.5);
  r.z = std::copysign(corrected / sd, diff);
  r.p_value = std::clamp(std::erfc(corrected / sd / std::sqrt(2.0)), 0.0, 1.0);
  return r;
}

absl::StatusOr<ConfidenceInterval> BootstrapDeltaCI(
    std::span<const double> baseline, std::span<const double> post,
    int resamples, std::uint64_t seed, double level) {
  if (baseline.empty() || post.empty()) {
    return absl::InvalidArgumentError("bootstrap needs two non-empty samples");
  }
  if (resamples < 1) return absl::InvalidArgumentError("resamples must be >= 1");
  if (!(level > 0.0 && level < 1.0)) {
    return absl::InvalidArgumentError("level must be in (0, 1)");
  }
  CounterRng rng(CounterRng::DeriveKey(seed, "bootstrap"));
  std::vector<double> deltas(static_cast<std::size_t>(resamples));
  auto resample_mean = [&](std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[rng.UniformInt(v.size())];
    return s / static_cast<double>(v.size());
  };
  for (auto& d : deltas) {
    const double b = resample_mean(baseline);
    d = resample_mean(post) - b;
  }
  std::sort(deltas.begin(), deltas.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(deltas.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, deltas.size() - 1);
    return deltas[lo] + (pos - static_cast<double>(lo)) * (deltas[hi] - deltas[lo]);
  };
  const double alpha = (1.0 - level) / 2.0;
  return ConfidenceInterval{quantile(alpha), quantile(1.0 - alpha)};
}

}  // namespace trackaudit
