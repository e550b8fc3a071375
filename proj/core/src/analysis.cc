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

#include "trackaudit/analysis.h"

#include <algorithm>
#include <thread>
#include <unordered_map>

#include "str_util.h"
#include "trackaudit/rng.h"
#include "trackaudit/stats.h"
#include "trackaudit/status_macros.h"

namespace trackaudit {

double AggregateOf(const SimilarityResult& r, Aggregate aggregate) {
  return aggregate == Aggregate::kMax ? r.max_sim : r.mean_sim;
}

absl::StatusOr<GroupComparison> ComparePhases(
    std::span<const double> baseline, std::span<const double> post,
    Aggregate aggregate, Group group, Environment environment,
    const CompareOptions& options) {
  if (baseline.empty() || post.empty()) {
    return absl::InvalidArgumentError(
        StrCat("cell ", ToString(group), "/", ToString(environment),
               " needs baseline and post scores"));
  }
  GroupComparison c;
  c.group = group;
  c.environment = environment;
  c.aggregate = aggregate;
  c.baseline_mean = Mean(baseline);
  c.post_mean = Mean(post);
  c.delta = c.post_mean - c.baseline_mean;
  c.n_baseline = static_cast<std::int64_t>(baseline.size());
  c.n_post = static_cast<std::int64_t>(post.size());
  ASSIGN_OR_RETURN(const MannWhitneyResult mw, MannWhitneyU(post, baseline));
  c.test_statistic = mw.u;
  c.z = mw.z;
  c.p_value = mw.p_value;
  const std::uint64_t seed = CounterRng::DeriveKey(
      options.bootstrap_seed,
      StrCat(ToString(group), "/", ToString(environment), "/",
             ToString(aggregate)));
  ASSIGN_OR_RETURN(const ConfidenceInterval ci,
                   BootstrapDeltaCI(baseline, post, options.bootstrap_resamples,
                                    seed));
  c.ci_low = ci.low;
  c.ci_high = ci.high;
  return c;
}

std::vector<GroupComparison> CompareCells(const ExperimentPlan& plan,
                                          std::span<const ScoredVideo> scores,
                                          Aggregate aggregate,
                                          const CompareOptions& options,
                                          std::vector<std::string>* warnings) {
  struct Cell {
    std::vector<double> baseline, post;
    std::map<int, std::vector<double>> by_day;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
        by_puppet;
  };
  std::map<std::pair<Group, Environment>, Cell> cells;
  for (const auto& s : scores) {
    Cell& cell = cells[{s.group, s.environment}];
    const double v = AggregateOf(s.result, aggregate);
    auto& pp = cell.by_puppet[s.puppet_id];
    if (s.phase == Phase::kBaseline) {
      cell.baseline.push_back(v);
      pp.first.push_back(v);
    } else {
      cell.post.push_back(v);
      cell.by_day[s.day_index].push_back(v);
      pp.second.push_back(v);
    }
  }
  std::vector<GroupComparison> out;
  for (const auto& pc : plan.cells) {
    const std::string name =
        StrCat(ToString(pc.group), "/", ToString(pc.environment));
    auto it = cells.find({pc.group, pc.environment});
    if (it == cells.end() || it->second.baseline.empty() ||
        it->second.post.empty()) {
      if (warnings != nullptr) {
        const bool has_base = it != cells.end() && !it->second.baseline.empty();
        warnings->push_back(StrCat("cell ", name, " omitted: no ",
                                   has_base ? "post" : "baseline",
                                   " snapshots"));
      }
      continue;
    }
    const Cell& cell = it->second;
    auto c = ComparePhases(cell.baseline, cell.post, aggregate, pc.group,
                           pc.environment, options);
    if (!c.ok()) {
      if (warnings != nullptr) {
        warnings->push_back(
            StrCat("cell ", name, " omitted: ", std::string(c.status().message())));
      }
      continue;
    }
    for (const auto& [day, vals] : cell.by_day) {
      c->per_day_delta[day] = Mean(vals) - c->baseline_mean;
    }
    double sum = 0.0;
    int n = 0;
    for (const auto& [id, phases] : cell.by_puppet) {
      if (phases.first.empty() || phases.second.empty()) continue;
      sum += Mean(phases.second) - Mean(phases.first);
      ++n;
    }
    if (n > 0) c->per_puppet_delta = sum / n;
    out.push_back(*std::move(c));
  }
  return out;
}

absl::StatusOr<RunAnalysis> ScoreRun(const RunArchive& archive,
                                     std::span<const ClaimRecord> claims,
                                     Embedder& embedder,
                                     const ScoreOptions& options) {
  ASSIGN_OR_RETURN(const ExperimentPlan plan, archive.ReadPlan());
  ASSIGN_OR_RETURN(const ClaimIndex index, ClaimIndex::Build(claims, embedder));

  RunAnalysis analysis;
  struct Pending {
    ScoredVideo sv;
    std::size_t text_slot;
  };
  std::vector<Pending> pending;
  std::vector<std::string> texts;  // unique video texts
  std::unordered_map<std::string, std::size_t> text_slot;

  for (const auto& spec : plan.Puppets()) {
    ++analysis.summary.puppets;
    LoadReport report;
    ASSIGN_OR_RETURN(std::vector<StoredRecord> records,
                     archive.LoadRecords(spec.puppet_id, &report));
    for (auto& w : report.warnings) analysis.warnings.push_back(std::move(w));
    bool failed = false;
    for (const auto& r : records) {
      switch (r.kind) {
        case RecordKind::kVisit:
          ++analysis.summary.visits;
          break;
        case RecordKind::kMarker:
          failed = failed || std::get<PhaseMarker>(r.record).failed;
          break;
        case RecordKind::kSnapshot: {
          const auto& snap = std::get<RecommendationSnapshot>(r.record);
          const bool base = snap.phase == Phase::kBaseline;
          ++(base ? analysis.summary.baseline_snapshots
                  : analysis.summary.post_snapshots);
          (base ? analysis.summary.baseline_videos
                : analysis.summary.post_videos) +=
              static_cast<std::int64_t>(snap.videos.size());
          for (const auto& v : snap.videos) {
            VideoText vt = MakeVideoText(v, embedder.max_tokens());
            auto [slot, inserted] = text_slot.try_emplace(vt.text, texts.size());
            if (inserted) texts.push_back(vt.text);
            Pending p;
            p.sv.puppet_id = spec.puppet_id;
            p.sv.group = spec.group;
            p.sv.environment = spec.environment;
            p.sv.phase = snap.phase;
            p.sv.day_index = snap.day_index;
            p.sv.position = v.position;
            p.sv.result.video_id = v.video_id;
            p.sv.result.used_transcript = vt.used_transcript;
            p.text_slot = slot->second;
            pending.push_back(std::move(p));
          }
          break;
        }
      }
    }
    if (failed) ++analysis.summary.failed_puppets;
  }

  std::vector<EmbeddingVector> vectors;
  if (!texts.empty()) {
    ASSIGN_OR_RETURN(vectors, embedder.Embed(texts));
  }
  // Score each unique text once; slots are written independently so the
  // worker count cannot change the result.
  std::vector<absl::StatusOr<SimilarityResult>> by_text(
      texts.size(), absl::UnknownError("unscored"));
  const std::size_t workers = static_cast<std::size_t>(
      std::clamp(options.workers, 1, 64));
  auto score_range = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < texts.size(); i += step) {
      by_text[i] = ScoreVector("", vectors[i], index);
    }
  };
  if (workers == 1 || texts.size() < 2) {
    score_range(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(score_range, w, workers);
  }
  analysis.scores.reserve(pending.size());
  for (auto& p : pending) {
    const auto& r = by_text[p.text_slot];
    if (!r.ok()) return r.status();
    p.sv.result.max_sim = r->max_sim;
    p.sv.result.mean_sim = r->mean_sim;
    p.sv.result.top_claim_id = r->top_claim_id;
    analysis.scores.push_back(std::move(p.sv));
  }
  for (Aggregate a : {Aggregate::kMax, Aggregate::kMean}) {
    analysis.tables[a] = CompareCells(
        plan, analysis.scores, a, options.compare,
        a == Aggregate::kMax ? &analysis.warnings : nullptr);
  }
  return analysis;
}

}  // namespace trackaudit
