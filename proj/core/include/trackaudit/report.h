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

#ifndef TRACKAUDIT_REPORT_H_
#define TRACKAUDIT_REPORT_H_

#include <filesystem>
#include <span>
#include <string>

#include "absl/status/status.h"
#include "trackaudit/analysis.h"

namespace trackaudit {

// comparisons.json: a JSON array with one object per cell.
std::string ComparisonsToJson(std::span<const GroupComparison> comparisons);

// One JSON object per line, one line per scored video.
std::string ScoresToJsonl(std::span<const ScoredVideo> scores);

// report.json: both aggregate tables, per-day deltas, run counts, warnings.
std::string ReportToJson(const RunAnalysis& analysis, Aggregate selected,
                         std::string_view embedder);

// Fixed-width text table for the terminal.
std::string FormatComparisonTable(std::span<const GroupComparison> comparisons,
                                  Aggregate aggregate);

// Per-cell before/after distribution of the selected aggregate, as CSV
// (phase,day_index,score) and an SVG histogram.
std::string CellScoresCsv(std::span<const ScoredVideo> scores, Group group,
                          Environment environment, Aggregate aggregate);
std::string CellHistogramSvg(std::span<const ScoredVideo> scores, Group group,
                             Environment environment, Aggregate aggregate);

// Writes comparisons.json (selected aggregate), scores.jsonl, report.json
// and plots/<group>__<environment>.{csv,svg} under `out_dir`.
absl::Status WriteAnalysisOutputs(const RunAnalysis& analysis,
                                  Aggregate selected, std::string_view embedder,
                                  const std::filesystem::path& out_dir);

}  // namespace trackaudit

#endif  // TRACKAUDIT_REPORT_H_
