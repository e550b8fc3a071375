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

#include <fstream>
#include <set>
#include <sstream>

#include "jsonl.h"
#include "str_util.h"
#include "trackaudit/experiment.h"
#include "trackaudit/rng.h"
#include "trackaudit/status_macros.h"

namespace trackaudit {
namespace {

using internal::Json;
using internal::OrderedJson;

// Reads fields of one JSON object, remembering which keys were used so
// typos in a config are reported instead of silently ignored.
class Fields {
 public:
  Fields(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {}

  absl::Status Int(std::string_view key, int& out) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (!v.is_number_integer()) return Bad(key, "an integer");
      const auto x = v.get<std::int64_t>();
      if (x < INT32_MIN || x > INT32_MAX) return Bad(key, "a 32-bit integer");
      out = static_cast<int>(x);
      return absl::OkStatus();
    });
  }
  absl::Status Int64(std::string_view key, std::int64_t& out) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (!v.is_number_integer()) return Bad(key, "an integer");
      out = v.get<std::int64_t>();
      return absl::OkStatus();
    });
  }
  // Accepts a non-negative integer or its decimal string, so seeds above
  // 2^53 survive tools that parse JSON numbers as doubles.
  absl::Status Seed(std::string_view key, std::uint64_t& out) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (v.is_number_unsigned()) {
        out = v.get<std::uint64_t>();
        return absl::OkStatus();
      }
      if (v.is_string()) {
        const auto s = v.get<std::string>();
        std::uint64_t x = 0;
        bool ok = !s.empty() && s.size() <= 20;
        for (char c : s) {
          if (c < '0' || c > '9') ok = false;
        }
        if (ok) {
          std::istringstream in(s);
          ok = static_cast<bool>(in >> x);
        }
        if (ok) {
          out = x;
          return absl::OkStatus();
        }
      }
      return Bad(key, "a non-negative integer or decimal string");
    });
  }
  absl::Status Double(std::string_view key, double& out) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (!v.is_number()) return Bad(key, "a number");
      out = v.get<double>();
      return absl::OkStatus();
    });
  }
  absl::Status Bool(std::string_view key, bool& out) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (!v.is_boolean()) return Bad(key, "true or false");
      out = v.get<bool>();
      return absl::OkStatus();
    });
  }
  absl::Status String(std::string_view key, std::string& out) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (!v.is_string()) return Bad(key, "a string");
      out = v.get<std::string>();
      return absl::OkStatus();
    });
  }
  absl::Status Path(std::string_view key, std::filesystem::path& out) {
    std::string s = out.string();
    RETURN_IF_ERROR(String(key, s));
    out = s;
    return absl::OkStatus();
  }
  absl::Status OptPath(std::string_view key,
                       std::optional<std::filesystem::path>& out) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (v.is_null()) {
        out.reset();
        return absl::OkStatus();
      }
      if (!v.is_string()) return Bad(key, "a string or null");
      out = v.get<std::string>();
      return absl::OkStatus();
    });
  }
  absl::Status Window(std::string_view key, DateRange& out) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (!v.is_object()) return Bad(key, "an object {\"first\", \"last\"}");
      Fields f(v, Sub(key));
      std::string first = FormatDate(out.first), last = FormatDate(out.last);
      RETURN_IF_ERROR(f.String("first", first));
      RETURN_IF_ERROR(f.String("last", last));
      RETURN_IF_ERROR(f.Finish());
      auto r = MakeDateRange(first, last);
      if (!r.ok()) return Prefix(key, r.status());
      out = *r;
      return absl::OkStatus();
    });
  }
  template <typename T, typename ParseFn>
  absl::Status EnumList(std::string_view key, std::vector<T>& out,
                        ParseFn parse) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (!v.is_array()) return Bad(key, "a list of strings");
      out.clear();
      for (const auto& e : v) {
        if (!e.is_string()) return Bad(key, "a list of strings");
        auto x = parse(e.template get<std::string>());
        if (!x.ok()) return Prefix(key, x.status());
        out.push_back(*x);
      }
      return absl::OkStatus();
    });
  }
  template <typename T, typename ParseFn>
  absl::Status Enum(std::string_view key, T& out, ParseFn parse) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (!v.is_string()) return Bad(key, "a string");
      auto x = parse(v.get<std::string>());
      if (!x.ok()) return Prefix(key, x.status());
      out = *x;
      return absl::OkStatus();
    });
  }
  absl::Status Object(std::string_view key,
                      const std::function<absl::Status(Fields&)>& fn) {
    return Get(key, [&](const Json& v) -> absl::Status {
      if (!v.is_object()) return Bad(key, "an object");
      Fields f(v, Sub(key));
      RETURN_IF_ERROR(fn(f));
      return f.Finish();
    });
  }
  absl::Status Raw(std::string_view key,
                   const std::function<absl::Status(const Json&)>& fn) {
    return Get(key, fn);
  }
  absl::Status Finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.contains(it.key())) {
        return absl::InvalidArgumentError(
            StrCat("unknown config key \"", Sub(it.key()), "\""));
      }
    }
    return absl::OkStatus();
  }
  std::string Sub(std::string_view key) const {
    return path_.empty() ? std::string(key) : StrCat(path_, ".", key);
  }

 private:
  absl::Status Get(std::string_view key,
                   const std::function<absl::Status(const Json&)>& fn) {
    used_.insert(std::string(key));
    auto it = obj_.find(key);
    if (it == obj_.end()) return absl::OkStatus();
    return fn(*it);
  }
  absl::Status Bad(std::string_view key, std::string_view want) const {
    return absl::InvalidArgumentError(
        StrCat("config key \"", Sub(key), "\" must be ", want));
  }
  absl::Status Prefix(std::string_view key, const absl::Status& s) const {
    return absl::Status(s.code(),
                        StrCat("config key \"", Sub(key), "\": ",
                               std::string(s.message())));
  }

  const Json& obj_;
  std::string path_;
  std::set<std::string, std::less<>> used_;
};

Timestamp DefaultEpoch() {
  return *ParseTimestamp("2026-01-05T09:00:00.000Z");
}

DateRange DefaultWindow() {
  return *MakeDateRange("2020-01-01", "2025-10-31");
}

ExperimentConfig Defaults() {
  ExperimentConfig c;
  // Absent keys mean the full design; an explicit [] is still rejected.
  c.groups = {Group::kExtremeLeft, Group::kLeft, Group::kRight,
              Group::kExtremeRight, Group::kMisinformation, Group::kControl};
  c.environments = {Environment::kTrackingPermissive,
                    Environment::kTrackingRestrictive};
  c.simulated_epoch = DefaultEpoch();
  c.corpus.misinformation_window = DefaultWindow();
  c.corpus.claims_window = DefaultWindow();
  return c;
}

OrderedJson WindowJson(const DateRange& r) {
  OrderedJson j;
  j["first"] = FormatDate(r.first);
  j["last"] = FormatDate(r.last);
  return j;
}

OrderedJson OptPathJson(const std::optional<std::filesystem::path>& p) {
  return p.has_value() ? OrderedJson(p->string()) : OrderedJson(nullptr);
}

OrderedJson ToOrderedJson(const ExperimentConfig& c, bool for_hash) {
  OrderedJson j;
  j["n_puppets_per_cell"] = c.n_puppets_per_cell;
  j["groups"] = OrderedJson::array();
  for (auto g : c.groups) j["groups"].push_back(std::string(ToString(g)));
  j["environments"] = OrderedJson::array();
  for (auto e : c.environments) {
    j["environments"].push_back(std::string(ToString(e)));
  }
  j["days"] = c.days;
  j["articles_per_day"] = c.articles_per_day;
  j["homepage_top_k"] = c.homepage_top_k;
  j["master_seed"] = std::to_string(c.master_seed);
  j["driver"] = std::string(ToString(c.driver));
  if (!for_hash) {
    j["archive"] = c.archive.string();
    j["workers"] = c.workers;
    j["durability"] = c.durability == Durability::kFsync ? "fsync" : "flush";
  }
  j["resample_daily"] = c.resample_daily;
  j["capture_pre_exposure"] = c.capture_pre_exposure;
  j["seed_video_topic"] = c.seed_video_topic;
  j["inter_day_seconds"] = c.inter_day_seconds;

  OrderedJson corpus;
  corpus["outlets"] = OptPathJson(c.corpus.outlets);
  corpus["articles"] = OptPathJson(c.corpus.articles);
  corpus["misinformation"] = OptPathJson(c.corpus.misinformation);
  corpus["claims"] = OptPathJson(c.corpus.claims);
  corpus["misinformation_window"] = WindowJson(c.corpus.misinformation_window);
  corpus["claims_window"] = WindowJson(c.corpus.claims_window);
  corpus["articles_per_outlet"] = c.corpus.articles_per_outlet;
  j["corpus"] = std::move(corpus);

  const WorldConfig& w = c.simulated;
  OrderedJson sim;
  sim["seed"] = std::to_string(w.seed);
  sim["n_topics"] = w.n_topics;
  sim["effect_size"] = w.effect_size;
  sim["catalog_size"] = w.catalog_size;
  sim["trackers_per_article"] = w.trackers_per_article;
  sim["homepage_size"] = w.homepage_size;
  sim["outlets_per_ideology"] = w.outlets_per_ideology;
  sim["articles_per_outlet"] = w.articles_per_outlet;
  sim["misinformation_articles"] = w.misinformation_articles;
  sim["n_claims"] = w.n_claims;
  sim["consent_banner_rate"] = w.consent_banner_rate;
  sim["epoch"] = FormatTimestamp(c.simulated_epoch);
  j["simulated"] = std::move(sim);

  OrderedJson real;
  real["endpoint"] = c.real.endpoint;
  real["page_scripts_dir"] = c.real.page_scripts_dir.string();
  real["capabilities"] = OrderedJson::parse(c.real.capabilities_json);
  real["watch_seconds"] = c.real.watch_seconds;
  real["platform_url"] = c.real.platform_url;
  real["seed_videos"] = OrderedJson::object();
  for (const auto& [topic, urls] : c.real.seed_videos) {
    real["seed_videos"][topic] = urls;
  }
  j["real"] = std::move(real);
  return j;
}

}  // namespace

absl::Status ValidateExperimentConfig(const ExperimentConfig& c) {
  auto bad = [](std::string_view what) {
    return absl::InvalidArgumentError(StrCat("invalid config: ", what));
  };
  if (c.n_puppets_per_cell < 1) return bad("n_puppets_per_cell must be >= 1");
  if (c.n_puppets_per_cell > 9999) return bad("n_puppets_per_cell must be <= 9999");
  if (c.groups.empty()) return bad("groups must be non-empty");
  if (c.environments.empty()) return bad("environments must be non-empty");
  if (std::set<Group>(c.groups.begin(), c.groups.end()).size() != c.groups.size()) {
    return bad("groups has duplicates");
  }
  if (std::set<Environment>(c.environments.begin(), c.environments.end())
          .size() != c.environments.size()) {
    return bad("environments has duplicates");
  }
  if (c.days < 1) return bad("days must be >= 1");
  if (c.articles_per_day < 0) return bad("articles_per_day must be >= 0");
  if (c.homepage_top_k < 1) return bad("homepage_top_k must be >= 1");
  if (c.workers < 1) return bad("workers must be >= 1");
  if (c.inter_day_seconds < 0) return bad("inter_day_seconds must be >= 0");
  if (c.seed_video_topic.empty()) return bad("seed_video_topic is empty");
  if (c.corpus.articles_per_outlet < 1) {
    return bad("corpus.articles_per_outlet must be >= 1");
  }
  if (c.driver == DriverKind::kSimulated) {
    RETURN_IF_ERROR(ValidateWorldConfig(c.simulated));
  } else if (c.real.watch_seconds < 0) {
    return bad("real.watch_seconds must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(std::string_view json,
                                                       std::string_view source) {
  Json root = Json::parse(json, nullptr, false);
  if (root.is_discarded() || !root.is_object()) {
    return absl::InvalidArgumentError(
        StrCat(source, ": config must be a JSON object"));
  }
  ExperimentConfig c = Defaults();
  Fields f(root, "");
  auto parse_all = [&]() -> absl::Status {
    RETURN_IF_ERROR(f.Int("n_puppets_per_cell", c.n_puppets_per_cell));
    RETURN_IF_ERROR(f.EnumList("groups", c.groups, ParseGroup));
    RETURN_IF_ERROR(f.EnumList("environments", c.environments, ParseEnvironment));
    RETURN_IF_ERROR(f.Int("days", c.days));
    RETURN_IF_ERROR(f.Int("articles_per_day", c.articles_per_day));
    RETURN_IF_ERROR(f.Int("homepage_top_k", c.homepage_top_k));
    RETURN_IF_ERROR(f.Seed("master_seed", c.master_seed));
    RETURN_IF_ERROR(f.Enum("driver", c.driver, ParseDriverKind));
    RETURN_IF_ERROR(f.Path("archive", c.archive));
    RETURN_IF_ERROR(f.Int("workers", c.workers));
    RETURN_IF_ERROR(f.Bool("resample_daily", c.resample_daily));
    RETURN_IF_ERROR(f.Bool("capture_pre_exposure", c.capture_pre_exposure));
    RETURN_IF_ERROR(f.String("seed_video_topic", c.seed_video_topic));
    RETURN_IF_ERROR(f.Int64("inter_day_seconds", c.inter_day_seconds));
    RETURN_IF_ERROR(f.Enum("durability", c.durability,
                           [](std::string_view s) -> absl::StatusOr<Durability> {
                             if (s == "fsync") return Durability::kFsync;
                             if (s == "flush") return Durability::kFlush;
                             return absl::InvalidArgumentError(
                                 StrCat("unknown durability \"", s,
                                        "\" (expected fsync or flush)"));
                           }));
    RETURN_IF_ERROR(f.Object("corpus", [&](Fields& g) -> absl::Status {
      RETURN_IF_ERROR(g.OptPath("outlets", c.corpus.outlets));
      RETURN_IF_ERROR(g.OptPath("articles", c.corpus.articles));
      RETURN_IF_ERROR(g.OptPath("misinformation", c.corpus.misinformation));
      RETURN_IF_ERROR(g.OptPath("claims", c.corpus.claims));
      RETURN_IF_ERROR(g.Window("misinformation_window",
                               c.corpus.misinformation_window));
      RETURN_IF_ERROR(g.Window("claims_window", c.corpus.claims_window));
      return g.Int("articles_per_outlet", c.corpus.articles_per_outlet);
    }));
    RETURN_IF_ERROR(f.Object("simulated", [&](Fields& g) -> absl::Status {
      WorldConfig& w = c.simulated;
      RETURN_IF_ERROR(g.Seed("seed", w.seed));
      RETURN_IF_ERROR(g.Int("n_topics", w.n_topics));
      RETURN_IF_ERROR(g.Double("effect_size", w.effect_size));
      RETURN_IF_ERROR(g.Int("catalog_size", w.catalog_size));
      RETURN_IF_ERROR(g.Int("trackers_per_article", w.trackers_per_article));
      RETURN_IF_ERROR(g.Int("homepage_size", w.homepage_size));
      RETURN_IF_ERROR(g.Int("outlets_per_ideology", w.outlets_per_ideology));
      RETURN_IF_ERROR(g.Int("articles_per_outlet", w.articles_per_outlet));
      RETURN_IF_ERROR(g.Int("misinformation_articles", w.misinformation_articles));
      RETURN_IF_ERROR(g.Int("n_claims", w.n_claims));
      RETURN_IF_ERROR(g.Double("consent_banner_rate", w.consent_banner_rate));
      std::string epoch = FormatTimestamp(c.simulated_epoch);
      RETURN_IF_ERROR(g.String("epoch", epoch));
      ASSIGN_OR_RETURN(c.simulated_epoch, ParseTimestamp(epoch));
      return absl::OkStatus();
    }));
    RETURN_IF_ERROR(f.Object("real", [&](Fields& g) -> absl::Status {
      RETURN_IF_ERROR(g.String("endpoint", c.real.endpoint));
      RETURN_IF_ERROR(g.Path("page_scripts_dir", c.real.page_scripts_dir));
      RETURN_IF_ERROR(g.Raw("capabilities", [&](const Json& v) -> absl::Status {
        if (!v.is_object()) {
          return absl::InvalidArgumentError(
              "config key \"real.capabilities\" must be an object");
        }
        c.real.capabilities_json = v.dump();
        return absl::OkStatus();
      }));
      RETURN_IF_ERROR(g.Double("watch_seconds", c.real.watch_seconds));
      RETURN_IF_ERROR(g.String("platform_url", c.real.platform_url));
      return g.Raw("seed_videos", [&](const Json& v) -> absl::Status {
        auto bad = absl::InvalidArgumentError(
            "config key \"real.seed_videos\" must map topics to URL lists");
        if (!v.is_object()) return bad;
        c.real.seed_videos.clear();
        for (auto it = v.begin(); it != v.end(); ++it) {
          if (!it->is_array()) return bad;
          auto& urls = c.real.seed_videos[it.key()];
          for (const auto& u : *it) {
            if (!u.is_string()) return bad;
            urls.push_back(u.get<std::string>());
          }
        }
        return absl::OkStatus();
      });
    }));
    return f.Finish();
  };
  if (absl::Status s = parse_all(); !s.ok()) {
    return absl::Status(s.code(), StrCat(source, ": ", std::string(s.message())));
  }
  if (absl::Status s = ValidateExperimentConfig(c); !s.ok()) {
    return absl::Status(s.code(), StrCat(source, ": ", std::string(s.message())));
  }
  return c;
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(
    const std::filesystem::path& path) {
  ASSIGN_OR_RETURN(std::ifstream in, internal::OpenInput(path));
  std::ostringstream ss;
  ss << in.rdbuf();
  ASSIGN_OR_RETURN(ExperimentConfig c, ParseExperimentConfig(ss.str(), path.string()));
  // Relative paths are relative to the config file.
  const auto base = path.parent_path();
  auto rebase = [&](std::filesystem::path& p) {
    if (!p.empty() && p.is_relative()) p = (base / p).lexically_normal();
  };
  auto rebase_opt = [&](std::optional<std::filesystem::path>& p) {
    if (p.has_value()) rebase(*p);
  };
  rebase(c.archive);
  rebase(c.real.page_scripts_dir);
  rebase_opt(c.corpus.outlets);
  rebase_opt(c.corpus.articles);
  rebase_opt(c.corpus.misinformation);
  rebase_opt(c.corpus.claims);
  return c;
}

std::string ExperimentConfigToJson(const ExperimentConfig& config) {
  return ToOrderedJson(config, false).dump(2) + "\n";
}

std::string ExperimentConfigHash(const ExperimentConfig& config) {
  OrderedJson j = ToOrderedJson(config, true);
  // Corpus file locations may move between machines; their contents are
  // what matters and are checked separately by the loaders.
  for (const char* k : {"outlets", "articles", "misinformation", "claims"}) {
    j["corpus"][k] = j["corpus"][k].is_null() ? "none" : "file";
  }
  j["real"]["page_scripts_dir"] = "";
  return ConfigHash(j.dump());
}

}  // namespace trackaudit
