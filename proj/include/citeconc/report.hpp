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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "citeconc/studies.hpp"
#include "json.hpp"

namespace citeconc {

/// Shortest representation that round-trips.
inline std::string format_number(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

/// FNV-1a over the canonical `key=value\n` echo of a report's configuration.
inline std::string config_hash(const std::vector<std::pair<std::string, std::string>>& config) {
  std::uint64_t h = 14695981039346656037ull;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : config) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

/// Leading CSV columns followed by the report's metric columns.
inline std::vector<std::string> csv_header(const SeriesReport& r) {
  std::vector<std::string> h{"year"};
  if (!r.group_name.empty()) h.push_back(r.group_name);
  h.insert(h.end(), {"n", "zero_count"});
  h.insert(h.end(), r.columns.begin(), r.columns.end());
  h.push_back("reason");
  return h;
}

inline void write_csv(const SeriesReport& r, std::ostream& out) {
  const auto header = csv_header(r);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : r.rows) {
    out << row.year;
    if (!r.group_name.empty()) out << ',' << row.group;
    out << ',' << row.n << ',' << row.zero_count;
    for (const auto& v : row.values) {
      out << ',';
      if (v) out << format_number(*v);
    }
    out << ',' << row.reason << '\n';
  }
}

inline nlohmann::ordered_json to_json(const SeriesReport& r) {
  nlohmann::ordered_json j;
  j["study"] = r.study;
  auto& cfg = j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config_hash"] = config_hash(r.config);
  j["columns"] = csv_header(r);
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["year"] = row.year;
    if (!r.group_name.empty()) o[r.group_name] = row.group;
    o["n"] = row.n;
    o["zero_count"] = row.zero_count;
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      if (row.values[k]) o[r.columns[k]] = *row.values[k];
      else o[r.columns[k]] = nullptr;
    }
    o["reason"] = row.reason;
    rows.push_back(std::move(o));
  }
  return j;
}

inline void write_json(const SeriesReport& r, std::ostream& out) { out << to_json(r).dump(2) << '\n'; }

/// Keeps letters, digits, '-' and '_' so labels are safe inside file names.
inline std::string file_safe(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out;
}

/// `<study>_<approach>_w<W>_<flags>` for a study run.
inline std::string report_stem(std::string_view study, const StudyConfig& cfg) {
  std::string s = file_safe(study);
  s += '_';
  s += to_string(cfg.approach);
  s += "_w" + std::to_string(cfg.window.length) + '_';
  s += cfg.include_uncited ? "inc" : "exc";
  s += cfg.exclude_self_citations ? "-noself" : "-self";
  s += cfg.core_only ? "-core" : "-all";
  s += cfg.normalized ? "-norm" : "-raw";
  if (cfg.region_removed) s += "-rm" + file_safe(*cfg.region_removed);
  if (cfg.field_filter) s += "-f" + file_safe(*cfg.field_filter);
  return s;
}

/// Writes `content` to `path` through a temporary file and a rename.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace citeconc
