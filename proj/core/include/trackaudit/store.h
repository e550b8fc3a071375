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

#ifndef TRACKAUDIT_STORE_H_
#define TRACKAUDIT_STORE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "trackaudit/labels.h"
#include "trackaudit/records.h"
#include "trackaudit/time.h"

namespace trackaudit {

enum class RecordKind { kVisit, kSnapshot, kMarker };

std::string_view ToString(RecordKind kind);

using Record = std::variant<VisitLog, RecommendationSnapshot, PhaseMarker>;

RecordKind KindOf(const Record& r);
const std::string& PuppetIdOf(const Record& r);

// One line of a per-puppet record file.
struct StoredRecord {
  std::int64_t seq = 0;
  std::string puppet_id;
  RecordKind kind = RecordKind::kVisit;
  Timestamp ts;
  Record record;
};

struct SnapshotFilter {
  std::optional<std::string> puppet_id;
  std::optional<Group> group;
  std::optional<Environment> environment;
  std::optional<Phase> phase;
  std::optional<int> day_index;
};

// Non-fatal findings while reading. A record file whose final line was cut
// short by a crash loads without that line; it is counted here.
struct LoadReport {
  std::int64_t truncated_lines = 0;
  std::vector<std::string> warnings;
};

enum class Durability {
  kFsync,  // fdatasync after every append
  kFlush,  // write(2) only; survives process death, not power loss
};

struct ArchiveManifest {
  std::string schema_version;
  std::string config_hash;
  Timestamp created_at;
};

// Directory layout:
//   manifest.json            schema_version, config_hash, created_at
//   plan.json                the experiment plan
//   runstate.json            checkpoint (owned by the experiment module)
//   records/<puppet>.jsonl   append-only envelopes, one per line
//
// One writer per puppet file at a time; appends for different puppets may
// run concurrently. Readers may run alongside writers and see a prefix.
class RunArchive {
 public:
  static constexpr std::string_view kSchemaVersion = "1.0";

  static bool Exists(const std::filesystem::path& root);
  // Fails if `root` already holds an archive.
  static absl::StatusOr<std::unique_ptr<RunArchive>> Create(
      const std::filesystem::path& root, std::string config_hash,
      Timestamp created_at, Durability durability = Durability::kFsync);
  // Refuses archives whose schema major version differs from ours.
  static absl::StatusOr<std::unique_ptr<RunArchive>> Open(
      const std::filesystem::path& root,
      Durability durability = Durability::kFsync);
  // For readers that must not change anything on disk; writes fail.
  static absl::StatusOr<std::unique_ptr<RunArchive>> OpenReadOnly(
      const std::filesystem::path& root);

  ~RunArchive();
  RunArchive(const RunArchive&) = delete;
  RunArchive& operator=(const RunArchive&) = delete;

  const std::filesystem::path& root() const { return root_; }
  const ArchiveManifest& manifest() const { return manifest_; }

  absl::Status WritePlan(const ExperimentPlan& plan);
  absl::StatusOr<ExperimentPlan> ReadPlan() const;

  // Validates and durably appends one record. The envelope timestamp is
  // the visit start or capture time; markers must pass `ts`.
  absl::StatusOr<std::int64_t> Append(const Record& record,
                                      std::optional<Timestamp> ts = std::nullopt);

  absl::StatusOr<std::vector<StoredRecord>> LoadRecords(
      std::string_view puppet_id, LoadReport* report = nullptr) const;

  // Ordered by (puppet_id, day_index, seq). Group and environment filters
  // resolve through plan.json.
  absl::StatusOr<std::vector<RecommendationSnapshot>> LoadSnapshots(
      const SnapshotFilter& filter, LoadReport* report = nullptr) const;

  // Puppets that have a record file, sorted.
  std::vector<std::string> PuppetIds() const;

  // Replace a small metadata file atomically (write temp, fsync, rename).
  absl::Status WriteFileAtomic(std::string_view name,
                               std::string_view contents) const;
  absl::StatusOr<std::optional<std::string>> ReadFile(std::string_view name) const;

 private:
  struct Writer {
    std::mutex mu;
    int fd = -1;
    std::int64_t next_seq = 0;
    bool opened = false;
  };

  RunArchive(std::filesystem::path root, ArchiveManifest manifest,
             Durability durability, bool read_only = false);
  static absl::StatusOr<ArchiveManifest> ReadManifest(
      const std::filesystem::path& root);
  absl::Status CheckWritable() const;
  std::filesystem::path RecordPath(std::string_view puppet_id) const;
  absl::Status OpenWriterLocked(std::string_view puppet_id, Writer& w);

  std::filesystem::path root_;
  ArchiveManifest manifest_;
  Durability durability_;
  bool read_only_ = false;
  std::mutex writers_mu_;
  std::map<std::string, std::unique_ptr<Writer>, std::less<>> writers_;
};

// Stable short hash of a configuration's canonical text.
std::string ConfigHash(std::string_view canonical_config);

}  // namespace trackaudit

#endif  // TRACKAUDIT_STORE_H_
