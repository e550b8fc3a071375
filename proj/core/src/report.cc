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

#include "trackaudit/report.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fmt/format.h"
#include "jsonl.h"
#include "str_util.h"
#include "trackaudit/status_macros.h"

namespace trackaudit {
namespace {

using internal::OrderedJson;

OrderedJson ComparisonJson(const GroupComparison& c) {
  OrderedJson j;
  j["group"] = std::string(ToString(c.group));
  j["environment"] = std::string(ToString(c.environment));
  j["aggregate"] = std::string(ToString(c.aggregate));
  j["baseline_mean"] = c.baseline_mean;
  j["post_mean"] = c.post_mean;
  j["delta"] = c.delta;
  j["test_statistic"] = c.test_statistic;
  j["z"] = c.z;
  j["p_value"] = c.p_value;
  j["n_baseline"] = c.n_baseline;
  j["n_post"] = c.n_post;
  j["ci95"] = OrderedJson::array({c.ci_low, c.ci_high});
  j["per_puppet_delta"] = c.per_puppet_delta.has_value()
                              ? OrderedJson(*c.per_puppet_delta)
                              : OrderedJson(nullptr);
  OrderedJson days = OrderedJson::object();
  for (const auto& [d, v] : c.per_day_delta) days[std::to_string(d)] = v;
  j["per_day_delta"] = std::move(days);
  return j;
}

absl::Status WriteText(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) return absl::UnavailableError(StrCat("cannot write ", p.string()));
  return absl::OkStatus();
}

std::string CellName(Group g, Environment e) {
  return StrCat(ToString(g), "__", ToString(e));
}

}  // namespace

std::string ComparisonsToJson(std::span<const GroupComparison> comparisons) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& c : comparisons) arr.push_back(ComparisonJson(c));
  return arr.dump(2) + "\n";
}

std::string ScoresToJsonl(std::span<const ScoredVideo> scores) {
  std::string out;
  for (const auto& s : scores) {
    OrderedJson j;
    j["puppet_id"] = s.puppet_id;
    j["group"] = std::string(ToString(s.group));
    j["environment"] = std::string(ToString(s.environment));
    j["phase"] = std::string(ToString(s.phase));
    j["day_index"] = s.day_index;
    j["position"] = s.position;
    j["video_id"] = s.result.video_id;
    j["max_sim"] = s.result.max_sim;
    j["mean_sim"] = s.result.mean_sim;
    j["top_claim_id"] = s.result.top_claim_id;
    j["used_transcript"] = s.result.used_transcript;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string ReportToJson(const RunAnalysis& analysis, Aggregate selected,
                         std::string_view embedder) {
  OrderedJson j;
  j["format"] = "trackaudit.report";
  j["version"] = 1;
  j["embedder"] = std::string(embedder);
  j["selected_aggregate"] = std::string(ToString(selected));
  OrderedJson tables = OrderedJson::object();
  for (const auto& [agg, table] : analysis.tables) {
    OrderedJson arr = OrderedJson::array();
    for (const auto& c : table) arr.push_back(ComparisonJson(c));
    tables[std::string(ToString(agg))] = std::move(arr);
  }
  j["tables"] = std::move(tables);
  const RunSummary& s = analysis.summary;
  OrderedJson sum;
  sum["puppets"] = s.puppets;
  sum["failed_puppets"] = s.failed_puppets;
  sum["baseline_snapshots"] = s.baseline_snapshots;
  sum["post_snapshots"] = s.post_snapshots;
  sum["baseline_videos"] = s.baseline_videos;
  sum["post_videos"] = s.post_videos;
  sum["visits"] = s.visits;
  j["run_summary"] = std::move(sum);
  j["warnings"] = analysis.warnings;
  return j.dump(2) + "\n";
}

std::string FormatComparisonTable(std::span<const GroupComparison> comparisons,
                                  Aggregate aggregate) {
  std::string out = fmt::format(
      "aggregate={}\n{:<16} {:<22} {:>9} {:>9} {:>9} {:>9} {:>6} {:>6} {:>21}\n",
      ToString(aggregate), "group", "environment", "baseline", "post", "delta",
      "p", "n_base", "n_post", "95% CI");
  for (const auto& c : comparisons) {
    out += fmt::format(
        "{:<16} {:<22} {:>9.4f} {:>9.4f} {:>+9.4f} {:>9.2e} {:>6} {:>6} "
        "[{:+.4f}, {:+.4f}]\n",
        ToString(c.group), ToString(c.environment), c.baseline_mean, c.post_mean,
        c.delta, c.p_value, c.n_baseline, c.n_post, c.ci_low, c.ci_high);
  }
  return out;
}

std::string CellScoresCsv(std::span<const ScoredVideo> scores, Group group,
                          Environment environment, Aggregate aggregate) {
  std::string out = "phase,day_index,puppet_id,video_id,score\n";
  for (const auto& s : scores) {
    if (s.group != group || s.environment != environment) continue;
    out += fmt::format("{},{},{},{},{:.17g}\n", ToString(s.phase), s.day_index,
                       s.puppet_id, s.result.video_id,
                       AggregateOf(s.result, aggregate));
  }
  return out;
}

std::string CellHistogramSvg(std::span<const ScoredVideo> scores, Group group,
                             Environment environment, Aggregate aggregate) {
  std::vector<double> base, post;
  for (const auto& s : scores) {
    if (s.group != group || s.environment != environment) continue;
    (s.phase == Phase::kBaseline ? base : post)
        .push_back(AggregateOf(s.result, aggregate));
  }
  constexpr int kBins = 24;
  constexpr double kW = 640, kH = 360, kLeft = 50, kBottom = 40, kTop = 40;
  double lo = 0.0, hi = 1.0;
  if (!base.empty() || !post.empty()) {
    lo = 1.0;
    hi = -1.0;
    for (double v : base) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : post) lo = std::min(lo, v), hi = std::max(hi, v);
    if (hi <= lo) hi = lo + 1e-6;
  }
  auto density = [&](const std::vector<double>& v) {
    std::vector<double> h(kBins, 0.0);
    for (double x : v) {
      int b = static_cast<int>((x - lo) / (hi - lo) * kBins);
      h[std::clamp(b, 0, kBins - 1)] += 1.0;
    }
    for (double& c : h) c /= std::max<std::size_t>(1, v.size());
    return h;
  };
  const auto hb = density(base), hp = density(post);
  double peak = 1e-9;
  for (int i = 0; i < kBins; ++i) peak = std::max({peak, hb[i], hp[i]});
  const double plot_w = kW - kLeft - 20, plot_h = kH - kTop - kBottom;
  const double bw = plot_w / kBins;
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{}\" y=\"20\">{} / {}: {} similarity, baseline (n={}) vs post (n={})</text>\n",
      kW, kH, kLeft, ToString(group), ToString(environment), ToString(aggregate),
      base.size(), post.size());
  auto bars = [&](const std::vector<double>& h, std::string_view color) {
    for (int i = 0; i < kBins; ++i) {
      const double bh = h[i] / peak * plot_h;
      svg += fmt::format(
          "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
          "fill=\"{}\" fill-opacity=\"0.5\"/>\n",
          kLeft + i * bw, kTop + plot_h - bh, bw, bh, color);
    }
  };
  bars(hb, "#1f77b4");
  bars(hp, "#d62728");
  svg += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<text x=\"{0}\" y=\"{3}\">{4:.3f}</text>\n"
      "<text x=\"{2}\" y=\"{3}\" text-anchor=\"end\">{5:.3f}</text>\n"
      "<text x=\"{6}\" y=\"{7}\" fill=\"#1f77b4\">baseline</text>\n"
      "<text x=\"{6}\" y=\"{8}\" fill=\"#d62728\">post</text>\n</svg>\n",
      kLeft, kTop + plot_h, kLeft + plot_w, kTop + plot_h + 16, lo, hi,
      kLeft + plot_w - 60, kTop + 12, kTop + 28);
  return svg;
}

absl::Status WriteAnalysisOutputs(const RunAnalysis& analysis,
                                  Aggregate selected, std::string_view embedder,
                                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "plots", ec);
  if (ec) {
    return absl::UnavailableError(
        StrCat("cannot create ", out_dir.string(), ": ", ec.message()));
  }
  auto it = analysis.tables.find(selected);
  const std::vector<GroupComparison> empty;
  const auto& table = it == analysis.tables.end() ? empty : it->second;
  RETURN_IF_ERROR(WriteText(out_dir / "comparisons.json", ComparisonsToJson(table)));
  RETURN_IF_ERROR(WriteText(out_dir / "scores.jsonl", ScoresToJsonl(analysis.scores)));
  RETURN_IF_ERROR(WriteText(out_dir / "report.json",
                            ReportToJson(analysis, selected, embedder)));
  for (const auto& c : table) {
    const std::string name = CellName(c.group, c.environment);
    RETURN_IF_ERROR(WriteText(
        out_dir / "plots" / (name + ".csv"),
        CellScoresCsv(analysis.scores, c.group, c.environment, selected)));
    RETURN_IF_ERROR(WriteText(
        out_dir / "plots" / (name + ".svg"),
        CellHistogramSvg(analysis.scores, c.group, c.environment, selected)));
  }
  return absl::OkStatus();
}

}  // namespace trackaudit
