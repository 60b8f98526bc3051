/*
   Copyright 2026 The citeconc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "citeconc/studies.hpp"
#include "citeconc/synthgen.hpp"

namespace citeconc {

/// A section of a flat key/value config file: the unnamed global section or a
/// `[study NAME]` block. Keys keep file order.
struct ConfigSection {
  std::string name;
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* get(std::string_view key) const {
    const std::string* found = nullptr;
    for (const auto& [k, v] : entries) {
      if (k == key) found = &v;
    }
    return found;
  }
};

struct ConfigFile {
  ConfigSection global;
  std::vector<ConfigSection> studies;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto p = s.find(sep, start);
    if (p == std::string_view::npos) p = s.size();
    auto item = trim(s.substr(start, p - start));
    if (!item.empty()) out.emplace_back(item);
    start = p + 1;
  }
  return out;
}

inline bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(std::string(key) + ": expected a boolean, got '" + std::string(v) + "'");
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end || v.empty()) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

}  // namespace detail

inline ConfigFile parse_config(std::istream& in) {
  ConfigFile cfg;
  ConfigSection* current = &cfg.global;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = detail::trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      auto inner = detail::trim(line.substr(1, line.size() - 2));
      if (!inner.starts_with("study ") && !inner.starts_with("study\t")) {
        throw ConfigError("line " + std::to_string(line_no) + ": sections must be '[study NAME]'");
      }
      auto name = detail::trim(inner.substr(6));
      if (name.empty()) throw ConfigError("line " + std::to_string(line_no) + ": study section needs a name");
      for (const auto& s : cfg.studies) {
        if (s.name == name) throw ConfigError("line " + std::to_string(line_no) + ": duplicate study '" + std::string(name) + "'");
      }
      cfg.studies.push_back({std::string(name), line_no, {}});
      current = &cfg.studies.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    auto key = detail::trim(line.substr(0, eq));
    auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    current->entries.emplace_back(std::string(key), std::string(value));
  }
  return cfg;
}

/// Kinds of analysis a study section can request.
enum class StudyKind { gini, gini_by_field, uncited, region_removal, region_tail, top_share, lorenz };

inline std::string_view to_string(StudyKind k) {
  switch (k) {
    case StudyKind::gini: return "gini";
    case StudyKind::gini_by_field: return "gini_by_field";
    case StudyKind::uncited: return "uncited";
    case StudyKind::region_removal: return "region_removal";
    case StudyKind::region_tail: return "region_tail";
    case StudyKind::top_share: return "top_share";
    case StudyKind::lorenz: return "lorenz";
  }
  return "gini";
}

inline StudyKind parse_study_kind(std::string_view s) {
  for (auto k : {StudyKind::gini, StudyKind::gini_by_field, StudyKind::uncited, StudyKind::region_removal,
                 StudyKind::region_tail, StudyKind::top_share, StudyKind::lorenz}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("study.kind: unknown kind '" + std::string(s) +
                    "' (gini, gini_by_field, uncited, region_removal, region_tail, top_share, lorenz)");
}

/// One fully expanded study run.
struct StudySpec {
  std::string name;
  StudyKind kind = StudyKind::gini;
  StudyConfig config;
  std::vector<double> pcts{0.01, 0.05, 0.10};
  bool tail_article_level = false;
  int lorenz_points = 20;
};

struct RunConfig {
  std::optional<std::filesystem::path> articles_path;
  std::optional<std::filesystem::path> edges_path;
  std::optional<GenParams> generator;
  YearRange span{1980, 2020};
  std::vector<std::string> regions;
  std::vector<StudySpec> studies;
  std::filesystem::path output_dir = "out";
  bool emit_csv = true;
  bool emit_json = true;
  std::uint64_t seed = 1;
};

/// Applies one `generator.*` key to generator parameters. Returns false for keys
/// outside the generator namespace.
inline bool apply_generator_key(GenParams& p, std::string_view key, std::string_view value) {
  auto schedule = [&](std::string_view v) {
    // "x", "start:end" or "start:end:geometric"
    auto parts = detail::split_list(v, ':');
    if (parts.empty() || parts.size() > 3) throw ConfigError(std::string(key) + ": expected 'start[:end[:geometric]]'");
    Schedule s;
    s.start = detail::parse_number<double>(key, parts[0]);
    s.end = parts.size() > 1 ? detail::parse_number<double>(key, parts[1]) : s.start;
    if (parts.size() == 3) {
      if (parts[2] != "geometric" && parts[2] != "linear") throw ConfigError(std::string(key) + ": growth must be 'linear' or 'geometric'");
      s.geometric = parts[2] == "geometric";
    }
    return s;
  };
  auto mix = [&](std::string_view v, const std::vector<MixEntry>& current) {
    // "label=share[:end_share][@refs_scale], ..."
    std::vector<MixEntry> out;
    for (const auto& item : detail::split_list(v)) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError(std::string(key) + ": expected 'label=share'");
      MixEntry e;
      e.label = std::string(detail::trim(std::string_view(item).substr(0, eq)));
      std::string rest(detail::trim(std::string_view(item).substr(eq + 1)));
      if (const auto at = rest.find('@'); at != std::string::npos) {
        e.refs_scale = detail::parse_number<double>(key, detail::trim(std::string_view(rest).substr(at + 1)));
        rest = rest.substr(0, at);
      } else {
        for (const auto& c : current) {
          if (c.label == e.label) e.refs_scale = c.refs_scale;
        }
      }
      e.share = schedule(rest);
      e.share.geometric = false;
      out.push_back(std::move(e));
    }
    return out;
  };

  if (!key.starts_with("generator.")) return false;
  const auto k = key.substr(10);
  if (k == "scenario") return true;  // handled by the caller
  if (k == "seed") p.seed = detail::parse_number<std::uint64_t>(key, value);
  else if (k == "articles_per_year") p.articles_per_year = schedule(value);
  else if (k == "refs_per_article") p.refs_per_article = schedule(value);
  else if (k == "attachment_offset") p.attachment_offset = detail::parse_number<double>(key, value);
  else if (k == "attachment_exponent") p.attachment_exponent = detail::parse_number<double>(key, value);
  else if (k == "recency_halflife") {
    if (value == "none" || value == "off") p.recency_halflife.reset();
    else p.recency_halflife = detail::parse_number<double>(key, value);
  } else if (k == "self_citation_rate") p.self_citation_rate = detail::parse_number<double>(key, value);
  else if (k == "author_reuse") p.author_reuse = detail::parse_number<double>(key, value);
  else if (k == "max_authors") p.max_authors = detail::parse_number<int>(key, value);
  else if (k == "journals_per_field") p.journals_per_field = detail::parse_number<int>(key, value);
  else if (k == "warmup_years") p.warmup_years = detail::parse_number<int>(key, value);
  else if (k == "field_mix") p.field_mix = mix(value, p.field_mix);
  else if (k == "region_mix") p.region_mix = mix(value, p.region_mix);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
  return true;
}

namespace detail {

inline const std::set<std::string_view>& study_keys() {
  static const std::set<std::string_view> keys{
      "study.kind", "study.approach", "study.include_uncited", "study.exclude_self", "study.core_only",
      "study.field", "window.length", "window.direction", "window.drop_earliest_population",
      "normalize.enabled", "normalize.mics_per_year", "normalize.rho_scope", "regions.remove",
      "top.pcts", "tail.article_level", "lorenz.points"};
  return keys;
}

inline const std::set<std::string_view>& global_keys() {
  static const std::set<std::string_view> keys{"input.articles", "input.edges", "span.start", "span.end",
                                               "regions", "output.dir", "output.formats", "seed"};
  return keys;
}

/// Values of list-capable keys, expanded as a cartesian product in this order.
inline constexpr std::string_view kExpandable[] = {"study.approach", "window.length", "study.include_uncited",
                                                   "study.exclude_self", "regions.remove"};

inline void build_specs(const std::string& name, const std::map<std::string, std::string>& kv,
                        std::vector<StudySpec>& out) {
  auto get = [&](std::string_view k) -> const std::string* {
    auto it = kv.find(std::string(k));
    return it == kv.end() ? nullptr : &it->second;
  };
  StudySpec base;
  base.name = name;
  if (auto v = get("study.kind")) base.kind = parse_study_kind(*v);
  StudyConfig& c = base.config;
  // Single-citation shares count citations without self-citations unless asked.
  if (base.kind == StudyKind::region_tail) c.exclude_self_citations = true;
  if (auto v = get("study.core_only")) c.core_only = parse_bool("study.core_only", *v);
  if (auto v = get("study.field")) c.field_filter = *v;
  if (auto v = get("window.drop_earliest_population")) {
    c.window.drop_earliest_population = parse_bool("window.drop_earliest_population", *v);
  }
  if (auto v = get("normalize.enabled")) c.normalized = parse_bool("normalize.enabled", *v);
  if (auto v = get("normalize.mics_per_year")) c.mics_per_year = parse_bool("normalize.mics_per_year", *v);
  if (auto v = get("normalize.rho_scope")) {
    if (*v == "study") c.rho_scope = RhoScope::study;
    else if (*v == "all_edges") c.rho_scope = RhoScope::all_edges;
    else throw ConfigError("normalize.rho_scope must be 'study' or 'all_edges'");
  }
  if (auto v = get("top.pcts")) {
    base.pcts.clear();
    for (const auto& p : split_list(*v)) {
      const double x = parse_number<double>("top.pcts", p);
      if (!(x > 0.0 && x <= 1.0)) throw ConfigError("top.pcts values must lie in (0, 1]");
      base.pcts.push_back(x);
    }
    if (base.pcts.empty()) throw ConfigError("top.pcts is empty");
  }
  if (auto v = get("tail.article_level")) base.tail_article_level = parse_bool("tail.article_level", *v);
  if (auto v = get("lorenz.points")) {
    base.lorenz_points = parse_number<int>("lorenz.points", *v);
    if (base.lorenz_points < 1) throw ConfigError("lorenz.points must be >= 1");
  }
  std::optional<Direction> direction;
  if (auto v = get("window.direction")) direction = parse_direction(*v);

  std::vector<std::vector<std::string>> lists;
  for (auto k : kExpandable) {
    auto v = get(k);
    lists.push_back(v ? split_list(*v) : std::vector<std::string>{});
    if (v && lists.back().empty()) throw ConfigError(std::string(k) + " is empty");
  }
  if (base.kind == StudyKind::region_removal && lists[4].empty()) {
    throw ConfigError("study '" + name + "': region_removal needs regions.remove");
  }
  std::vector<std::size_t> idx(lists.size(), 0);
  while (true) {
    StudySpec s = base;
    auto pick = [&](std::size_t i) -> const std::string* { return lists[i].empty() ? nullptr : &lists[i][idx[i]]; };
    if (auto v = pick(0)) s.config.approach = parse_approach(*v);
    if (auto v = pick(1)) {
      s.config.window.length = parse_number<int>("window.length", *v);
    }
    if (auto v = pick(2)) s.config.include_uncited = parse_bool("study.include_uncited", *v);
    if (auto v = pick(3)) s.config.exclude_self_citations = parse_bool("study.exclude_self", *v);
    if (auto v = pick(4)) s.config.region_removed = *v;
    const auto want = s.config.approach == Approach::citation_based ? Direction::forward : Direction::backward;
    if (direction && *direction != want) {
      throw ConfigError("study '" + name + "': window.direction " + std::string(to_string(*direction)) +
                        " contradicts " + std::string(to_string(s.config.approach)));
    }
    s.config.window.direction = want;
    if (s.kind != StudyKind::gini && s.kind != StudyKind::gini_by_field && s.kind != StudyKind::lorenz &&
        s.config.approach != Approach::citation_based) {
      throw ConfigError("study '" + name + "': kind " + std::string(to_string(s.kind)) +
                        " is citation-based only");
    }
    s.config.validate();
    out.push_back(std::move(s));
    bool advanced = false;
    for (std::size_t d = lists.size(); d-- > 0;) {
      if (lists[d].size() > 1 && ++idx[d] < lists[d].size()) {
        advanced = true;
        break;
      }
      idx[d] = 0;
    }
    if (!advanced) return;
  }
}

}  // namespace detail

/// Validates every key and expands study sections into individual runs. Relative
/// paths are resolved against `base_dir`.
inline RunConfig make_run_config(const ConfigFile& file, const std::filesystem::path& base_dir = {}) {
  RunConfig rc;
  std::map<std::string, std::string> defaults;
  std::optional<std::string> scenario_name;
  std::vector<std::pair<std::string, std::string>> gen_keys;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  for (const auto& [k, v] : file.global.entries) {
    if (detail::study_keys().contains(k)) {
      defaults[k] = v;
    } else if (k.starts_with("generator.")) {
      if (k == "generator.scenario") scenario_name = v;
      else gen_keys.emplace_back(k, v);
    } else if (!detail::global_keys().contains(k)) {
      throw ConfigError("unknown config key '" + k + "'");
    } else if (k == "input.articles") {
      rc.articles_path = resolve(v);
    } else if (k == "input.edges") {
      rc.edges_path = resolve(v);
    } else if (k == "span.start") {
      rc.span.first = detail::parse_number<int>(k, v);
    } else if (k == "span.end") {
      rc.span.last = detail::parse_number<int>(k, v);
    } else if (k == "regions") {
      rc.regions = detail::split_list(v);
    } else if (k == "output.dir") {
      rc.output_dir = resolve(v);
    } else if (k == "output.formats") {
      rc.emit_csv = rc.emit_json = false;
      for (const auto& f : detail::split_list(v)) {
        if (f == "csv") rc.emit_csv = true;
        else if (f == "json") rc.emit_json = true;
        else throw ConfigError("output.formats: unknown format '" + f + "'");
      }
      if (!rc.emit_csv && !rc.emit_json) throw ConfigError("output.formats is empty");
    } else if (k == "seed") {
      rc.seed = detail::parse_number<std::uint64_t>(k, v);
    }
  }
  if (rc.span.empty()) throw ConfigError("span.start must not exceed span.end");
  const bool has_input = rc.articles_path || rc.edges_path;
  if (has_input && (!rc.articles_path || !rc.edges_path)) {
    throw ConfigError("input.articles and input.edges must be given together");
  }
  if (has_input == scenario_name.has_value()) {
    throw ConfigError("set exactly one of input.articles/input.edges or generator.scenario");
  }
  if (!scenario_name && !gen_keys.empty()) throw ConfigError("generator.* keys need generator.scenario");
  if (scenario_name) {
    GenParams p = scenario(*scenario_name);
    p.span = rc.span;
    p.seed = rc.seed;
    for (const auto& [k, v] : gen_keys) apply_generator_key(p, k, v);
    p.validate();
    rc.generator = p;
  }
  if (file.studies.empty()) throw ConfigError("config defines no [study NAME] sections");
  for (const auto& section : file.studies) {
    auto kv = defaults;
    for (const auto& [k, v] : section.entries) {
      if (!detail::study_keys().contains(k)) {
        throw ConfigError("study '" + section.name + "': unknown key '" + k + "'");
      }
      kv[k] = v;
    }
    detail::build_specs(section.name, kv, rc.studies);
  }
  return rc;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return make_run_config(parse_config(in), path.parent_path());
}

}  // namespace citeconc
