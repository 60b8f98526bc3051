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
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "citeconc/corpus.hpp"

namespace citeconc {

inline constexpr std::string_view kArticlesHeader = "id\tpub_year\tfield\tregion\tjournal_id\tauthor_ids";
inline constexpr std::string_view kEdgesHeader = "citing_id\tcited_id";

namespace detail {

inline std::size_t split_tabs(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out.size();
}

inline void split_authors(std::string_view field, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (start <= field.size()) {
    auto semi = field.find(';', start);
    if (semi == std::string_view::npos) semi = field.size();
    if (semi > start) out.push_back(field.substr(start, semi - start));
    start = semi + 1;
  }
}

inline int parse_year(std::string_view token, std::size_t line) {
  int year = 0;
  const auto* end = token.data() + token.size();
  auto [p, ec] = std::from_chars(token.data(), end, year);
  if (ec != std::errc{} || p != end || token.empty()) {
    throw DataError("unparsable year '" + std::string(token) + "'", line);
  }
  return year;
}

/// Line reader that strips a trailing CR and skips blank lines after the header.
class TsvReader {
 public:
  TsvReader(std::istream& in, std::string_view header, std::string_view what)
      : in_(in) {
    if (!next_raw()) throw DataError(std::string(what) + " file is empty (missing header row)", 1);
    if (line_ != header) {
      throw DataError(std::string(what) + " header must be '" + std::string(header) + "'", 1);
    }
  }

  bool next(std::vector<std::string_view>& cols) {
    while (next_raw()) {
      if (line_.empty()) continue;
      split_tabs(line_, cols);
      return true;
    }
    return false;
  }

  std::size_t line_number() const noexcept { return line_no_; }

 private:
  bool next_raw() {
    if (!std::getline(in_, line_)) return false;
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    return true;
  }

  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

inline void expect_columns(const std::vector<std::string_view>& cols, std::size_t n,
                           std::size_t line) {
  if (cols.size() != n) {
    throw DataError("expected " + std::to_string(n) + " columns, found " + std::to_string(cols.size()),
                    line);
  }
}

}  // namespace detail

/// Loads the articles and edges tables into an indexed corpus.
inline Corpus load_corpus(std::istream& articles, std::istream& edges, const CorpusOptions& options) {
  CorpusBuilder builder(options);
  std::vector<std::string_view> cols, authors;
  {
    detail::TsvReader reader(articles, kArticlesHeader, "articles");
    while (reader.next(cols)) {
      const auto line = reader.line_number();
      detail::expect_columns(cols, 6, line);
      const int year = detail::parse_year(cols[1], line);
      detail::split_authors(cols[5], authors);
      builder.add_article(cols[0], year, cols[2], cols[3], cols[4], authors, line);
    }
  }
  {
    detail::TsvReader reader(edges, kEdgesHeader, "edges");
    while (reader.next(cols)) {
      detail::expect_columns(cols, 2, reader.line_number());
      builder.add_edge(cols[0], cols[1]);
    }
  }
  return std::move(builder).build();
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

inline Corpus load_corpus_files(const std::filesystem::path& articles_path,
                                const std::filesystem::path& edges_path,
                                const CorpusOptions& options) {
  auto a = open_input(articles_path);
  auto e = open_input(edges_path);
  try {
    return load_corpus(a, e, options);
  } catch (const DataError& err) {
    // Attach the file name; the line number is already in the message.
    throw DataError(std::string(err.what()) + " (" + articles_path.filename().string() + " / " +
                    edges_path.filename().string() + ")");
  }
}

/// Writes the articles table in index order.
inline void write_articles(const Corpus& corpus, std::ostream& out) {
  out << kArticlesHeader << '\n';
  for (ArticleIndex i = 0; i < corpus.num_articles(); ++i) {
    out << corpus.id(i) << '\t' << corpus.year(i) << '\t' << corpus.fields()[corpus.field(i)] << '\t'
        << corpus.regions()[corpus.region(i)] << '\t' << corpus.journals()[corpus.journal(i)] << '\t';
    bool first = true;
    for (auto a : corpus.authors(i)) {
      if (!first) out << ';';
      out << corpus.author_labels()[a];
      first = false;
    }
    out << '\n';
  }
}

/// Writes the edges table ordered by (citing index, cited index).
inline void write_edges(const Corpus& corpus, std::ostream& out) {
  out << kEdgesHeader << '\n';
  for (ArticleIndex i = 0; i < corpus.num_articles(); ++i) {
    for (auto to : corpus.references(i)) out << corpus.id(i) << '\t' << corpus.id(to) << '\n';
  }
}

/// Row counts, drop tallies and histograms gathered without building a Corpus.
struct ValidationReport {
  std::size_t article_rows = 0;
  std::size_t edge_rows = 0;
  std::size_t articles_retained = 0;
  std::size_t edges_retained = 0;
  DropTally drops;
  YearRange span;
  std::map<int, std::size_t> by_year;
  std::map<std::string, std::size_t> by_field;
  std::map<std::string, std::size_t> by_region;
};

/// Scans both tables applying the same drop rules as load_corpus. When `span` is
/// empty the span is taken from the observed publication years.
inline ValidationReport scan_tables(std::istream& articles, std::istream& edges, YearRange span = {}) {
  ValidationReport rep;
  struct Row {
    std::string id;
    int year;
  };
  std::vector<Row> rows;
  std::vector<std::string_view> cols;
  {
    detail::TsvReader reader(articles, kArticlesHeader, "articles");
    while (reader.next(cols)) {
      const auto line = reader.line_number();
      detail::expect_columns(cols, 6, line);
      if (cols[0].empty()) throw DataError("empty article id", line);
      if (cols[2].empty()) throw DataError("empty field label", line);
      rows.push_back({std::string(cols[0]), detail::parse_year(cols[1], line)});
      ++rep.by_field[std::string(cols[2])];
      ++rep.by_region[std::string(cols[3])];
    }
  }
  rep.article_rows = rows.size();
  if (span.empty() && !rows.empty()) {
    span = {rows.front().year, rows.front().year};
    for (const auto& r : rows) {
      span.first = std::min(span.first, r.year);
      span.last = std::max(span.last, r.year);
    }
  }
  rep.span = span;
  std::unordered_map<std::string, int> year_of;
  year_of.reserve(rows.size());
  for (const auto& r : rows) {
    if (year_of.contains(r.id)) {
      ++rep.drops.duplicate_id;
      continue;
    }
    if (!span.contains(r.year)) {
      ++rep.drops.out_of_span;
      continue;
    }
    year_of.emplace(r.id, r.year);
    ++rep.by_year[r.year];
  }
  rep.articles_retained = year_of.size();

  struct PairHash {
    std::size_t operator()(const std::pair<std::string, std::string>& p) const noexcept {
      return std::hash<std::string>{}(p.first) * 31u + std::hash<std::string>{}(p.second);
    }
  };
  std::unordered_set<std::pair<std::string, std::string>, PairHash> seen;
  detail::TsvReader reader(edges, kEdgesHeader, "edges");
  while (reader.next(cols)) {
    detail::expect_columns(cols, 2, reader.line_number());
    ++rep.edge_rows;
    if (cols[0] == cols[1]) {
      ++rep.drops.self_loop;
      continue;
    }
    auto a = year_of.find(std::string(cols[0]));
    auto b = year_of.find(std::string(cols[1]));
    if (a == year_of.end() || b == year_of.end()) {
      ++rep.drops.dangling;
      continue;
    }
    if (a->second < b->second) {
      ++rep.drops.future_dated;
      continue;
    }
    if (!seen.emplace(std::string(cols[0]), std::string(cols[1])).second) {
      ++rep.drops.duplicate_edge;
      continue;
    }
  }
  rep.edges_retained = seen.size();
  return rep;
}

}  // namespace citeconc
