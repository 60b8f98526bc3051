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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "citeconc/error.hpp"

namespace citeconc {

using ArticleIndex = std::uint32_t;
using LabelId = std::uint32_t;

/// Inclusive range of calendar years. Empty when first > last.
struct YearRange {
  int first = 0;
  int last = -1;

  bool empty() const noexcept { return first > last; }
  int size() const noexcept { return empty() ? 0 : last - first + 1; }
  bool contains(int year) const noexcept { return year >= first && year <= last; }

  friend bool operator==(const YearRange&, const YearRange&) = default;
};

/// Interned string labels (fields, regions, journals, authors).
class LabelTable {
 public:
  LabelId intern(std::string_view label) {
    auto it = index_.find(std::string(label));
    if (it != index_.end()) return it->second;
    const auto id = static_cast<LabelId>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), id);
    return id;
  }

  std::optional<LabelId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& operator[](LabelId id) const { return labels_.at(id); }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, LabelId> index_;
};

/// Why an input row was not retained.
struct DropTally {
  std::size_t duplicate_id = 0;     // article rows (only when duplicates are tolerated)
  std::size_t out_of_span = 0;      // article rows
  std::size_t self_loop = 0;        // edge rows
  std::size_t dangling = 0;         // edge rows
  std::size_t future_dated = 0;     // edge rows
  std::size_t duplicate_edge = 0;   // edge rows

  std::size_t edges_dropped() const noexcept {
    return self_loop + dangling + future_dated + duplicate_edge;
  }
  std::size_t articles_dropped() const noexcept { return duplicate_id + out_of_span; }

  friend bool operator==(const DropTally&, const DropTally&) = default;
};

struct Provenance {
  std::size_t article_rows = 0;
  std::size_t edge_rows = 0;
  DropTally drops;
};

struct CorpusOptions {
  YearRange span{1980, 2020};
  /// Closed set of region labels. Empty means regions are discovered from the data.
  std::vector<std::string> regions;
  /// Duplicate article ids are a hard error unless this is false, in which case later
  /// rows are dropped and tallied.
  bool strict_duplicate_ids = true;
};

/// Read-only view of one article.
struct ArticleView {
  ArticleIndex index;
  std::string_view id;
  int pub_year;
  LabelId field;
  LabelId region;
  LabelId journal;
  std::span<const LabelId> authors;
};

class CorpusBuilder;

/// Immutable indexed store of articles and citation edges.
///
/// Articles are addressed by dense ArticleIndex in insertion order. Both edge
/// directions are stored in CSR form; neighbours are sorted by index. Each edge also
/// carries a self-citation flag (shared author id).
class Corpus {
 public:
  Corpus() = default;

  std::size_t num_articles() const noexcept { return years_.size(); }
  std::size_t num_edges() const noexcept { return backward_.size(); }
  YearRange span() const noexcept { return span_; }

  ArticleView article(ArticleIndex i) const {
    return {i, ids_[i], years_[i], fields_[i], regions_[i], journals_[i], authors(i)};
  }
  const std::string& id(ArticleIndex i) const { return ids_[i]; }
  int year(ArticleIndex i) const { return years_[i]; }
  LabelId field(ArticleIndex i) const { return fields_[i]; }
  LabelId region(ArticleIndex i) const { return regions_[i]; }
  LabelId journal(ArticleIndex i) const { return journals_[i]; }
  std::span<const LabelId> authors(ArticleIndex i) const {
    return {author_ids_.data() + author_offsets_[i], author_ids_.data() + author_offsets_[i + 1]};
  }

  std::optional<ArticleIndex> find(std::string_view id) const {
    auto it = id_index_.find(std::string(id));
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Articles citing `cited` (forward index).
  std::span<const ArticleIndex> citing(ArticleIndex cited) const {
    return row(forward_offsets_, forward_, cited);
  }
  std::span<const std::uint8_t> citing_self(ArticleIndex cited) const {
    return row(forward_offsets_, forward_self_, cited);
  }
  /// Articles referenced by `citing` (backward index).
  std::span<const ArticleIndex> references(ArticleIndex citing) const {
    return row(backward_offsets_, backward_, citing);
  }
  std::span<const std::uint8_t> references_self(ArticleIndex citing) const {
    return row(backward_offsets_, backward_self_, citing);
  }

  /// ncits_y: retained edges whose citing article was published in `year`.
  std::size_t edges_in_year(int year, bool exclude_self = false) const {
    if (!span_.contains(year)) return 0;
    const auto k = static_cast<std::size_t>(year - span_.first);
    return exclude_self ? year_edges_[k] - year_self_edges_[k] : year_edges_[k];
  }
  std::size_t self_edges_in_year(int year) const {
    return span_.contains(year) ? year_self_edges_[static_cast<std::size_t>(year - span_.first)] : 0;
  }

  std::size_t article_count(LabelId field, int year) const {
    return span_.contains(year) ? field_year_articles_[cell(field, year)] : 0;
  }
  /// Sum of reference-list lengths over a field's articles published in `year`.
  std::size_t reference_sum(LabelId field, int year) const {
    return span_.contains(year) ? field_year_refs_[cell(field, year)] : 0;
  }

  /// Articles published in `year`, in index order.
  std::span<const ArticleIndex> published_in(int year) const {
    if (!span_.contains(year)) return {};
    const auto k = static_cast<std::size_t>(year - span_.first);
    return {by_year_.data() + by_year_offsets_[k], by_year_.data() + by_year_offsets_[k + 1]};
  }

  /// Articles published anywhere in `years` (clipped to the span), ordered by year
  /// then index.
  std::span<const ArticleIndex> published_between(YearRange years) const {
    const int first = std::max(years.first, span_.first);
    const int last = std::min(years.last, span_.last);
    if (first > last) return {};
    return {by_year_.data() + by_year_offsets_[static_cast<std::size_t>(first - span_.first)],
            by_year_.data() + by_year_offsets_[static_cast<std::size_t>(last - span_.first) + 1]};
  }

  /// Position of an article inside the year-ordered sequence behind published_between().
  std::size_t year_order_position(ArticleIndex i) const { return year_position_[i]; }
  std::size_t year_order_offset(int year) const {
    return by_year_offsets_[static_cast<std::size_t>(std::clamp(year, span_.first, span_.last + 1) - span_.first)];
  }

  const LabelTable& fields() const noexcept { return fields_table_; }
  const LabelTable& regions() const noexcept { return regions_table_; }
  const LabelTable& journals() const noexcept { return journals_table_; }
  const LabelTable& author_labels() const noexcept { return authors_table_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  /// Sub-corpus of articles with keep[i] != 0; edges restricted to kept endpoints.
  /// Label tables are carried over unchanged so zero-article labels stay known.
  Corpus subset(std::span<const std::uint8_t> keep) const;

 private:
  friend class CorpusBuilder;

  template <class T>
  static std::span<const T> row(const std::vector<std::size_t>& offsets,
                                const std::vector<T>& data, ArticleIndex i) {
    return {data.data() + offsets[i], data.data() + offsets[i + 1]};
  }
  std::size_t cell(LabelId field, int year) const {
    return static_cast<std::size_t>(field) * static_cast<std::size_t>(span_.size()) +
           static_cast<std::size_t>(year - span_.first);
  }

  YearRange span_{};
  std::vector<std::string> ids_;
  std::vector<int> years_;
  std::vector<LabelId> fields_, regions_, journals_;
  std::vector<std::size_t> author_offsets_{0};
  std::vector<LabelId> author_ids_;  // sorted within each article
  std::unordered_map<std::string, ArticleIndex> id_index_;

  std::vector<std::size_t> forward_offsets_{0}, backward_offsets_{0};
  std::vector<ArticleIndex> forward_, backward_;
  std::vector<std::uint8_t> forward_self_, backward_self_;

  std::vector<std::size_t> year_edges_, year_self_edges_;
  std::vector<std::size_t> field_year_articles_, field_year_refs_;
  std::vector<std::size_t> by_year_offsets_{0};
  std::vector<ArticleIndex> by_year_;
  std::vector<std::size_t> year_position_;

  LabelTable fields_table_, regions_table_, journals_table_, authors_table_;
  Provenance provenance_;
};

/// Accumulates articles and edges, applies the drop rules and builds a Corpus.
///
/// All articles must be added before the first edge that refers to them is resolved;
/// edges given by id are resolved in build().
class CorpusBuilder {
 public:
  explicit CorpusBuilder(CorpusOptions options) : options_(std::move(options)) {
    if (options_.span.empty()) throw ConfigError("corpus span is empty");
    for (const auto& r : options_.regions) corpus_.regions_table_.intern(r);
  }

  /// Adds an article row. Returns false when the row was dropped (out of span or a
  /// tolerated duplicate). Throws DataError on a strict duplicate, an empty field or
  /// a region outside the configured set.
  bool add_article(std::string_view id, int pub_year, std::string_view field,
                   std::string_view region, std::string_view journal,
                   std::span<const std::string_view> authors, std::size_t line = 0) {
    ++corpus_.provenance_.article_rows;
    if (id.empty()) fail("empty article id", line);
    if (field.empty()) fail("empty field label for article '" + std::string(id) + "'", line);
    if (corpus_.id_index_.contains(std::string(id))) {
      if (options_.strict_duplicate_ids) fail("duplicate article id '" + std::string(id) + "'", line);
      ++corpus_.provenance_.drops.duplicate_id;
      return false;
    }
    if (!options_.span.contains(pub_year)) {
      ++corpus_.provenance_.drops.out_of_span;
      return false;
    }
    LabelId region_id;
    if (!options_.regions.empty()) {
      auto r = corpus_.regions_table_.find(region);
      if (!r) fail("region '" + std::string(region) + "' is not in the configured region set", line);
      region_id = *r;
    } else {
      region_id = corpus_.regions_table_.intern(region);
    }
    const auto idx = static_cast<ArticleIndex>(corpus_.ids_.size());
    corpus_.ids_.emplace_back(id);
    corpus_.id_index_.emplace(corpus_.ids_.back(), idx);
    corpus_.years_.push_back(pub_year);
    corpus_.fields_.push_back(corpus_.fields_table_.intern(field));
    corpus_.regions_.push_back(region_id);
    corpus_.journals_.push_back(corpus_.journals_table_.intern(journal));
    const auto begin = corpus_.author_ids_.size();
    for (auto a : authors) {
      if (!a.empty()) corpus_.author_ids_.push_back(corpus_.authors_table_.intern(a));
    }
    auto first = corpus_.author_ids_.begin() + static_cast<std::ptrdiff_t>(begin);
    std::sort(first, corpus_.author_ids_.end());
    corpus_.author_ids_.erase(std::unique(first, corpus_.author_ids_.end()), corpus_.author_ids_.end());
    corpus_.author_offsets_.push_back(corpus_.author_ids_.size());
    return true;
  }

  /// Adds an edge row by article id. Resolution happens immediately, so all articles
  /// must already be present.
  void add_edge(std::string_view citing_id, std::string_view cited_id) {
    ++corpus_.provenance_.edge_rows;
    if (citing_id == cited_id) {
      ++corpus_.provenance_.drops.self_loop;
      return;
    }
    auto a = corpus_.find(citing_id);
    auto b = corpus_.find(cited_id);
    if (!a || !b) {
      ++corpus_.provenance_.drops.dangling;
      return;
    }
    push_edge(*a, *b);
  }

  /// Adds an edge row between already-added articles.
  void add_edge(ArticleIndex citing, ArticleIndex cited) {
    ++corpus_.provenance_.edge_rows;
    if (citing == cited) {
      ++corpus_.provenance_.drops.self_loop;
      return;
    }
    if (citing >= corpus_.ids_.size() || cited >= corpus_.ids_.size()) {
      ++corpus_.provenance_.drops.dangling;
      return;
    }
    push_edge(citing, cited);
  }

  std::size_t num_articles() const noexcept { return corpus_.ids_.size(); }

  Corpus build() &&;

 private:
  friend class Corpus;

  [[noreturn]] static void fail(const std::string& what, std::size_t line) {
    if (line) throw DataError(what, line);
    throw DataError(what);
  }

  void push_edge(ArticleIndex citing, ArticleIndex cited) {
    if (corpus_.years_[citing] < corpus_.years_[cited]) {
      ++corpus_.provenance_.drops.future_dated;
      return;
    }
    edges_.emplace_back(citing, cited);
  }

  CorpusOptions options_;
  Corpus corpus_;
  std::vector<std::pair<ArticleIndex, ArticleIndex>> edges_;
};

namespace detail {

inline bool share_author(std::span<const LabelId> a, std::span<const LabelId> b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

}  // namespace detail

inline Corpus CorpusBuilder::build() && {
  Corpus& c = corpus_;
  c.span_ = options_.span;
  const std::size_t n = c.ids_.size();
  const auto years = static_cast<std::size_t>(c.span_.size());

  // Backward CSR from edges sorted by (citing, cited); duplicates collapse here.
  std::sort(edges_.begin(), edges_.end());
  const auto unique_end = std::unique(edges_.begin(), edges_.end());
  c.provenance_.drops.duplicate_edge += static_cast<std::size_t>(edges_.end() - unique_end);
  edges_.erase(unique_end, edges_.end());
  edges_.shrink_to_fit();

  c.backward_offsets_.assign(n + 1, 0);
  c.forward_offsets_.assign(n + 1, 0);
  for (auto [from, to] : edges_) {
    ++c.backward_offsets_[from + 1];
    ++c.forward_offsets_[to + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    c.backward_offsets_[i + 1] += c.backward_offsets_[i];
    c.forward_offsets_[i + 1] += c.forward_offsets_[i];
  }
  c.backward_.resize(edges_.size());
  c.backward_self_.resize(edges_.size());
  c.forward_.resize(edges_.size());
  c.forward_self_.resize(edges_.size());
  c.year_edges_.assign(years, 0);
  c.year_self_edges_.assign(years, 0);
  {
    std::vector<std::size_t> fwd_pos(c.forward_offsets_.begin(), c.forward_offsets_.end() - 1);
    // Iterating in (citing, cited) order fills every forward row in ascending citing order.
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto [from, to] = edges_[e];
      const bool self = detail::share_author(c.authors(from), c.authors(to));
      c.backward_[e] = to;
      c.backward_self_[e] = self;
      const auto p = fwd_pos[to]++;
      c.forward_[p] = from;
      c.forward_self_[p] = self;
      const auto y = static_cast<std::size_t>(c.years_[from] - c.span_.first);
      ++c.year_edges_[y];
      if (self) ++c.year_self_edges_[y];
    }
  }
  edges_.clear();
  edges_.shrink_to_fit();

  const auto nfields = c.fields_table_.size();
  c.field_year_articles_.assign(nfields * years, 0);
  c.field_year_refs_.assign(nfields * years, 0);
  c.by_year_offsets_.assign(years + 1, 0);
  for (ArticleIndex i = 0; i < n; ++i) {
    const auto k = c.cell(c.fields_[i], c.years_[i]);
    ++c.field_year_articles_[k];
    c.field_year_refs_[k] += c.backward_offsets_[i + 1] - c.backward_offsets_[i];
    ++c.by_year_offsets_[static_cast<std::size_t>(c.years_[i] - c.span_.first) + 1];
  }
  for (std::size_t y = 0; y < years; ++y) c.by_year_offsets_[y + 1] += c.by_year_offsets_[y];
  c.by_year_.resize(n);
  c.year_position_.resize(n);
  {
    std::vector<std::size_t> pos(c.by_year_offsets_.begin(), c.by_year_offsets_.end() - 1);
    for (ArticleIndex i = 0; i < n; ++i) {
      const auto p = pos[static_cast<std::size_t>(c.years_[i] - c.span_.first)]++;
      c.by_year_[p] = i;
      c.year_position_[i] = p;
    }
  }
  return std::move(corpus_);
}

inline Corpus Corpus::subset(std::span<const std::uint8_t> keep) const {
  if (keep.size() != num_articles()) throw ConfigError("subset mask size does not match corpus");
  CorpusBuilder b(CorpusOptions{span_, {}, true});
  // Seed label tables in the same order so label ids are stable across subsets.
  b.corpus_.fields_table_ = fields_table_;
  b.corpus_.regions_table_ = regions_table_;
  b.corpus_.journals_table_ = journals_table_;
  b.corpus_.authors_table_ = authors_table_;
  Corpus& c = b.corpus_;
  std::vector<ArticleIndex> remap(num_articles(), static_cast<ArticleIndex>(-1));
  for (ArticleIndex i = 0; i < num_articles(); ++i) {
    if (!keep[i]) continue;
    remap[i] = static_cast<ArticleIndex>(c.ids_.size());
    c.ids_.push_back(ids_[i]);
    c.id_index_.emplace(ids_[i], remap[i]);
    c.years_.push_back(years_[i]);
    c.fields_.push_back(fields_[i]);
    c.regions_.push_back(regions_[i]);
    c.journals_.push_back(journals_[i]);
    const auto a = authors(i);
    c.author_ids_.insert(c.author_ids_.end(), a.begin(), a.end());
    c.author_offsets_.push_back(c.author_ids_.size());
  }
  c.provenance_.article_rows = c.ids_.size();
  for (ArticleIndex i = 0; i < num_articles(); ++i) {
    if (!keep[i]) continue;
    for (auto to : references(i)) {
      if (keep[to]) b.edges_.emplace_back(remap[i], remap[to]);
    }
  }
  c.provenance_.edge_rows = b.edges_.size();
  return std::move(b).build();
}

/// True iff the citing and cited articles share at least one author id.
inline bool is_self_citation(const Corpus& corpus, ArticleIndex citing, ArticleIndex cited) {
  return detail::share_author(corpus.authors(citing), corpus.authors(cited));
}

inline bool is_self_citation(const Corpus& corpus, std::string_view citing_id,
                             std::string_view cited_id) {
  auto a = corpus.find(citing_id);
  auto b = corpus.find(cited_id);
  if (!a || !b) throw DataError("self-citation check on unresolved edge endpoint");
  return is_self_citation(corpus, *a, *b);
}

/// Journals with at least one article in every year of the span.
inline std::vector<std::uint8_t> core_journal_mask(const Corpus& corpus) {
  const auto span = corpus.span();
  const auto years = static_cast<std::size_t>(span.size());
  std::vector<std::uint8_t> seen(corpus.journals().size() * years, 0);
  for (ArticleIndex i = 0; i < corpus.num_articles(); ++i) {
    seen[corpus.journal(i) * years + static_cast<std::size_t>(corpus.year(i) - span.first)] = 1;
  }
  std::vector<std::uint8_t> core(corpus.journals().size(), 0);
  for (std::size_t j = 0; j < core.size(); ++j) {
    core[j] = std::all_of(seen.begin() + static_cast<std::ptrdiff_t>(j * years),
                          seen.begin() + static_cast<std::ptrdiff_t>((j + 1) * years),
                          [](std::uint8_t s) { return s != 0; });
  }
  return core;
}

/// Restricts the corpus to journals indexed in every year of its span.
inline Corpus filter_core_journals(const Corpus& corpus) {
  const auto core = core_journal_mask(corpus);
  std::vector<std::uint8_t> keep(corpus.num_articles());
  for (ArticleIndex i = 0; i < corpus.num_articles(); ++i) keep[i] = core[corpus.journal(i)];
  return corpus.subset(keep);
}

/// Removes a region's articles together with every edge they take part in.
inline Corpus remove_region(const Corpus& corpus, std::string_view region) {
  auto r = corpus.regions().find(region);
  if (!r) throw ConfigError("unknown region '" + std::string(region) + "'");
  std::vector<std::uint8_t> keep(corpus.num_articles());
  for (ArticleIndex i = 0; i < corpus.num_articles(); ++i) keep[i] = corpus.region(i) != *r;
  return corpus.subset(keep);
}

}  // namespace citeconc
