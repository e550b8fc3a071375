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

#include "trackaudit/store.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <tuple>

#include "codec.h"
#include "fmt/format.h"
#include "jsonl.h"
#include "str_util.h"
#include "trackaudit/rng.h"
#include "trackaudit/status_macros.h"

namespace trackaudit {
namespace {

using internal::Json;
using internal::OrderedJson;

absl::Status ErrnoStatus(std::string_view what, const std::filesystem::path& p) {
  return absl::UnavailableError(
      StrCat(what, " ", p.string(), ": ", std::strerror(errno)));
}

bool ValidPuppetId(std::string_view id) {
  if (id.empty() || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
  });
}

absl::StatusOr<RecordKind> ParseKind(std::string_view s) {
  if (s == "visit") return RecordKind::kVisit;
  if (s == "snapshot") return RecordKind::kSnapshot;
  if (s == "marker") return RecordKind::kMarker;
  return absl::InvalidArgumentError(StrCat("unknown record kind \"", s, "\""));
}

absl::Status WriteAll(int fd, std::string_view data,
                      const std::filesystem::path& p) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return ErrnoStatus("write", p);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return absl::OkStatus();
}

int MajorVersion(std::string_view v) {
  int major = 0;
  for (char c : v) {
    if (c < '0' || c > '9') break;
    major = major * 10 + (c - '0');
  }
  return major;
}

absl::StatusOr<std::string> Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return absl::NotFoundError(StrCat("cannot read ", p.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view ToString(RecordKind kind) {
  switch (kind) {
    case RecordKind::kVisit:
      return "visit";
    case RecordKind::kSnapshot:
      return "snapshot";
    case RecordKind::kMarker:
      return "marker";
  }
  return "?";
}

RecordKind KindOf(const Record& r) {
  return static_cast<RecordKind>(r.index());
}

const std::string& PuppetIdOf(const Record& r) {
  return std::visit([](const auto& v) -> const std::string& { return v.puppet_id; },
                    r);
}

std::string ConfigHash(std::string_view canonical_config) {
  return fmt::format("{:016x}", CounterRng::Mix(CounterRng::HashString(canonical_config)));
}

RunArchive::RunArchive(std::filesystem::path root, ArchiveManifest manifest,
                       Durability durability, bool read_only)
    : root_(std::move(root)),
      manifest_(std::move(manifest)),
      durability_(durability),
      read_only_(read_only) {}

absl::Status RunArchive::CheckWritable() const {
  if (read_only_) {
    return absl::FailedPreconditionError(
        StrCat("archive ", root_.string(), " is open read-only"));
  }
  return absl::OkStatus();
}

RunArchive::~RunArchive() {
  for (auto& [id, w] : writers_) {
    if (w->fd >= 0) ::close(w->fd);
  }
}

bool RunArchive::Exists(const std::filesystem::path& root) {
  std::error_code ec;
  return std::filesystem::exists(root / "manifest.json", ec);
}

absl::StatusOr<std::unique_ptr<RunArchive>> RunArchive::Create(
    const std::filesystem::path& root, std::string config_hash,
    Timestamp created_at, Durability durability) {
  if (Exists(root)) {
    return absl::AlreadyExistsError(
        StrCat("archive already exists at ", root.string()));
  }
  std::error_code ec;
  std::filesystem::create_directories(root / "records", ec);
  if (ec) {
    return absl::UnavailableError(
        StrCat("cannot create ", root.string(), ": ", ec.message()));
  }
  ArchiveManifest m{std::string(kSchemaVersion), std::move(config_hash),
                    created_at};
  std::unique_ptr<RunArchive> archive(
      new RunArchive(root, std::move(m), durability));
  OrderedJson j;
  j["format"] = "trackaudit.archive";
  j["schema_version"] = archive->manifest_.schema_version;
  j["config_hash"] = archive->manifest_.config_hash;
  j["created_at"] = FormatTimestamp(created_at);
  j["rng"] = std::string(CounterRng::kAlgorithm);
  RETURN_IF_ERROR(archive->WriteFileAtomic("manifest.json", j.dump(2) + "\n"));
  return archive;
}

absl::StatusOr<ArchiveManifest> RunArchive::ReadManifest(
    const std::filesystem::path& root) {
  if (!Exists(root)) {
    return absl::NotFoundError(StrCat("no archive at ", root.string()));
  }
  ASSIGN_OR_RETURN(const std::string text, Slurp(root / "manifest.json"));
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::DataLossError(
        StrCat("corrupt manifest ", (root / "manifest.json").string()));
  }
  ArchiveManifest m;
  ASSIGN_OR_RETURN(m.schema_version,
                   internal::RequiredString(j, "schema_version"));
  if (MajorVersion(m.schema_version) != MajorVersion(kSchemaVersion)) {
    return absl::FailedPreconditionError(
        StrCat("archive schema ", m.schema_version, " is incompatible with ",
               kSchemaVersion));
  }
  ASSIGN_OR_RETURN(m.config_hash, internal::RequiredString(j, "config_hash"));
  ASSIGN_OR_RETURN(const std::string created,
                   internal::RequiredString(j, "created_at"));
  ASSIGN_OR_RETURN(m.created_at, ParseTimestamp(created));
  return m;
}

absl::StatusOr<std::unique_ptr<RunArchive>> RunArchive::Open(
    const std::filesystem::path& root, Durability durability) {
  ASSIGN_OR_RETURN(ArchiveManifest m, ReadManifest(root));
  std::error_code ec;
  std::filesystem::create_directories(root / "records", ec);
  return std::unique_ptr<RunArchive>(
      new RunArchive(root, std::move(m), durability));
}

absl::StatusOr<std::unique_ptr<RunArchive>> RunArchive::OpenReadOnly(
    const std::filesystem::path& root) {
  ASSIGN_OR_RETURN(ArchiveManifest m, ReadManifest(root));
  return std::unique_ptr<RunArchive>(
      new RunArchive(root, std::move(m), Durability::kFlush, true));
}

absl::Status RunArchive::WriteFileAtomic(std::string_view name,
                                         std::string_view contents) const {
  RETURN_IF_ERROR(CheckWritable());
  const auto path = root_ / name;
  const auto tmp = root_ / StrCat(name, ".tmp");
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) return ErrnoStatus("open", tmp);
  absl::Status s = WriteAll(fd, contents, tmp);
  if (s.ok() && durability_ == Durability::kFsync && ::fdatasync(fd) != 0) {
    s = ErrnoStatus("fdatasync", tmp);
  }
  ::close(fd);
  if (!s.ok()) return s;
  if (::rename(tmp.c_str(), path.c_str()) != 0) return ErrnoStatus("rename", tmp);
  return absl::OkStatus();
}

absl::StatusOr<std::optional<std::string>> RunArchive::ReadFile(
    std::string_view name) const {
  const auto path = root_ / name;
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::optional<std::string>{};
  ASSIGN_OR_RETURN(std::string text, Slurp(path));
  return std::optional<std::string>{std::move(text)};
}

absl::Status RunArchive::WritePlan(const ExperimentPlan& plan) {
  RETURN_IF_ERROR(CheckWritable());
  RETURN_IF_ERROR(ValidatePlan(plan));
  return WriteFileAtomic("plan.json", internal::PlanToJson(plan).dump(2) + "\n");
}

absl::StatusOr<ExperimentPlan> RunArchive::ReadPlan() const {
  ASSIGN_OR_RETURN(std::optional<std::string> text, ReadFile("plan.json"));
  if (!text.has_value()) {
    return absl::NotFoundError(StrCat("no plan.json in ", root_.string()));
  }
  Json j = Json::parse(*text, nullptr, false);
  if (j.is_discarded()) {
    return absl::DataLossError(StrCat("corrupt plan.json in ", root_.string()));
  }
  return internal::PlanFromJson(j);
}

std::filesystem::path RunArchive::RecordPath(std::string_view puppet_id) const {
  return root_ / "records" / StrCat(puppet_id, ".jsonl");
}

absl::Status RunArchive::OpenWriterLocked(std::string_view puppet_id,
                                          Writer& w) {
  const auto path = RecordPath(puppet_id);
  LoadReport report;
  ASSIGN_OR_RETURN(std::vector<StoredRecord> existing,
                   LoadRecords(puppet_id, &report));
  w.next_seq = existing.empty() ? 1 : existing.back().seq + 1;
  if (report.truncated_lines > 0) {
    // Drop the torn tail so the next append starts on a fresh line.
    ASSIGN_OR_RETURN(const std::string text, Slurp(path));
    const auto keep = text.rfind('\n');
    std::filesystem::resize_file(
        path, keep == std::string::npos ? 0 : keep + 1);
  }
  w.fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (w.fd < 0) return ErrnoStatus("open", path);
  w.opened = true;
  return absl::OkStatus();
}

absl::StatusOr<std::int64_t> RunArchive::Append(const Record& record,
                                                std::optional<Timestamp> ts) {
  RETURN_IF_ERROR(CheckWritable());
  const std::string& puppet_id = PuppetIdOf(record);
  if (!ValidPuppetId(puppet_id)) {
    return absl::InvalidArgumentError(
        StrCat("puppet_id \"", puppet_id,
               "\" must be non-empty [A-Za-z0-9._-] and not start with '.'"));
  }
  OrderedJson body;
  Timestamp when{};
  switch (KindOf(record)) {
    case RecordKind::kVisit: {
      const auto& v = std::get<VisitLog>(record);
      RETURN_IF_ERROR(ValidateVisitLog(v));
      body = internal::VisitLogToJson(v);
      when = v.started_at;
      break;
    }
    case RecordKind::kSnapshot: {
      const auto& s = std::get<RecommendationSnapshot>(record);
      RETURN_IF_ERROR(ValidateSnapshot(s));
      body = internal::SnapshotToJson(s);
      when = s.captured_at;
      break;
    }
    case RecordKind::kMarker: {
      const auto& m = std::get<PhaseMarker>(record);
      if (m.day_index < 0) {
        return absl::InvalidArgumentError("marker day_index is negative");
      }
      if (!ts.has_value()) {
        return absl::InvalidArgumentError("marker appends need a timestamp");
      }
      body = internal::MarkerToJson(m);
      break;
    }
  }
  if (ts.has_value()) when = *ts;

  Writer* w = nullptr;
  {
    std::lock_guard<std::mutex> lock(writers_mu_);
    auto& slot = writers_[puppet_id];
    if (!slot) slot = std::make_unique<Writer>();
    w = slot.get();
  }
  std::lock_guard<std::mutex> lock(w->mu);
  if (!w->opened) RETURN_IF_ERROR(OpenWriterLocked(puppet_id, *w));

  OrderedJson env;
  env["seq"] = w->next_seq;
  env["puppet_id"] = puppet_id;
  env["kind"] = std::string(ToString(KindOf(record)));
  env["ts"] = FormatTimestamp(when);
  env["body"] = std::move(body);
  const std::string line = env.dump() + "\n";
  const auto path = RecordPath(puppet_id);
  RETURN_IF_ERROR(WriteAll(w->fd, line, path));
  if (durability_ == Durability::kFsync && ::fdatasync(w->fd) != 0) {
    return ErrnoStatus("fdatasync", path);
  }
  return w->next_seq++;
}

absl::StatusOr<std::vector<StoredRecord>> RunArchive::LoadRecords(
    std::string_view puppet_id, LoadReport* report) const {
  std::vector<StoredRecord> out;
  const auto path = RecordPath(puppet_id);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return out;
  ASSIGN_OR_RETURN(const std::string text, Slurp(path));
  const std::string source = path.string();
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const std::size_t nl = text.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string_view line(text.data() + pos,
                                (terminated ? nl : text.size()) - pos);
    pos = terminated ? nl + 1 : text.size();
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    auto fail = [&](std::string_view what) -> absl::Status {
      return absl::DataLossError(
          StrCat(source, ":", line_no, ": corrupt record: ", what));
    };
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      if (!terminated) {
        // A crash mid-append leaves an unterminated final line.
        if (report != nullptr) {
          ++report->truncated_lines;
          report->warnings.push_back(
              StrCat(source, ":", line_no, ": truncated final record skipped"));
        }
        break;
      }
      return fail("malformed JSON");
    }
    StoredRecord r;
    auto seq = j.find("seq");
    if (seq == j.end() || !seq->is_number_integer()) return fail("missing seq");
    r.seq = seq->get<std::int64_t>();
    auto pid = internal::RequiredString(j, "puppet_id");
    if (!pid.ok()) return fail(std::string(pid.status().message()));
    r.puppet_id = *pid;
    if (r.puppet_id != puppet_id) return fail("puppet_id does not match file");
    auto kind_s = internal::RequiredString(j, "kind");
    if (!kind_s.ok()) return fail(std::string(kind_s.status().message()));
    auto kind = ParseKind(*kind_s);
    if (!kind.ok()) return fail(std::string(kind.status().message()));
    r.kind = *kind;
    auto ts_s = internal::RequiredString(j, "ts");
    if (!ts_s.ok()) return fail(std::string(ts_s.status().message()));
    auto ts = ParseTimestamp(*ts_s);
    if (!ts.ok()) return fail(std::string(ts.status().message()));
    r.ts = *ts;
    auto body = j.find("body");
    if (body == j.end() || !body->is_object()) return fail("missing body");
    absl::Status decoded;
    switch (r.kind) {
      case RecordKind::kVisit: {
        auto v = internal::VisitLogFromJson(*body, r.puppet_id);
        decoded = v.status();
        if (v.ok()) r.record = *std::move(v);
        break;
      }
      case RecordKind::kSnapshot: {
        auto s = internal::SnapshotFromJson(*body, r.puppet_id);
        decoded = s.status();
        if (s.ok()) r.record = *std::move(s);
        break;
      }
      case RecordKind::kMarker: {
        auto m = internal::MarkerFromJson(*body, r.puppet_id);
        decoded = m.status();
        if (m.ok()) r.record = *std::move(m);
        break;
      }
    }
    if (!decoded.ok()) return fail(std::string(decoded.message()));
    if (!out.empty() && r.seq <= out.back().seq) {
      return fail(StrCat("sequence number ", r.seq, " does not increase"));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> RunArchive::PuppetIds() const {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& entry :
       std::filesystem::directory_iterator(root_ / "records", ec)) {
    if (entry.path().extension() == ".jsonl") {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

absl::StatusOr<std::vector<RecommendationSnapshot>> RunArchive::LoadSnapshots(
    const SnapshotFilter& filter, LoadReport* report) const {
  std::optional<ExperimentPlan> plan;
  if (filter.group.has_value() || filter.environment.has_value()) {
    ASSIGN_OR_RETURN(plan, ReadPlan());
  }
  struct Keyed {
    std::string puppet_id;
    int day;
    std::int64_t seq;
    RecommendationSnapshot snap;
  };
  std::vector<Keyed> found;
  for (const auto& id : PuppetIds()) {
    if (filter.puppet_id.has_value() && *filter.puppet_id != id) continue;
    if (plan.has_value()) {
      const PuppetSpec* spec = plan->FindPuppet(id);
      if (spec == nullptr) continue;
      if (filter.group.has_value() && spec->group != *filter.group) continue;
      if (filter.environment.has_value() &&
          spec->environment != *filter.environment) {
        continue;
      }
    }
    ASSIGN_OR_RETURN(std::vector<StoredRecord> records, LoadRecords(id, report));
    for (auto& r : records) {
      if (r.kind != RecordKind::kSnapshot) continue;
      auto& s = std::get<RecommendationSnapshot>(r.record);
      if (filter.phase.has_value() && s.phase != *filter.phase) continue;
      if (filter.day_index.has_value() && s.day_index != *filter.day_index) {
        continue;
      }
      found.push_back({id, s.day_index, r.seq, std::move(s)});
    }
  }
  std::sort(found.begin(), found.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.puppet_id, a.day, a.seq) <
           std::tie(b.puppet_id, b.day, b.seq);
  });
  std::vector<RecommendationSnapshot> out;
  out.reserve(found.size());
  for (auto& k : found) out.push_back(std::move(k.snap));
  return out;
}

}  // namespace trackaudit
