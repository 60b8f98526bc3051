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

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "citeconc/corpus.hpp"

namespace citeconc {

enum class Direction { forward, backward };

inline std::string_view to_string(Direction d) {
  return d == Direction::forward ? "forward" : "backward";
}

inline Direction parse_direction(std::string_view s) {
  if (s == "forward") return Direction::forward;
  if (s == "backward") return Direction::backward;
  throw ConfigError("window.direction must be 'forward' or 'backward', got '" + std::string(s) + "'");
}

/// Citation window. The publication year itself is never counted.
struct WindowSpec {
  Direction direction = Direction::forward;
  int length = 5;
  /// Backward only: also drop the reference year whose population starts at the
  /// first span year.
  bool drop_earliest_population = false;

  static constexpr bool exclude_pub_year = true;

  void validate() const {
    if (length < 1) throw ConfigError("window length must be >= 1, got " + std::to_string(length));
  }

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

inline WindowSpec forward_window(int length) { return {Direction::forward, length, false}; }
inline WindowSpec backward_window(int length, bool drop_earliest = false) {
  return {Direction::backward, length, drop_earliest};
}

namespace detail {

inline void require(const WindowSpec& w, Direction d) {
  w.validate();
  if (w.direction != d) {
    throw ConfigError("expected a " + std::string(to_string(d)) + " window, got " +
                      std::string(to_string(w.direction)));
  }
}

}  // namespace detail

/// Years in which citations to an article published in `pub_year` are counted.
inline YearRange counted_years(int pub_year, const WindowSpec& w) {
  detail::require(w, Direction::forward);
  return {pub_year + 1, pub_year + w.length};
}

/// Publication years whose full forward window lies inside `span`.
inline YearRange eligible_pub_years_forward(YearRange span, const WindowSpec& w) {
  detail::require(w, Direction::forward);
  if (span.empty()) return {};
  return {span.first, span.last - w.length};
}

/// Publication years of the population cited from `ref_year`, or nullopt when that
/// population would reach before the span.
inline std::optional<YearRange> cited_population_backward(int ref_year, YearRange span,
                                                          const WindowSpec& w) {
  detail::require(w, Direction::backward);
  if (!span.contains(ref_year)) return std::nullopt;
  const int oldest = ref_year - w.length;
  if (oldest < span.first) return std::nullopt;
  if (w.drop_earliest_population && oldest == span.first) return std::nullopt;
  return YearRange{oldest, ref_year - 1};
}

/// Reference years for which cited_population_backward is defined.
inline YearRange analyzable_ref_years_backward(YearRange span, const WindowSpec& w) {
  detail::require(w, Direction::backward);
  if (span.empty()) return {};
  const int first = span.first + w.length + (w.drop_earliest_population ? 1 : 0);
  return {first, span.last};
}

/// Number of in-window citations received by `article`, summed over all counted years.
inline std::size_t windowed_citation_count(const Corpus& corpus, ArticleIndex article,
                                           const WindowSpec& w, bool exclude_self) {
  const auto years = counted_years(corpus.year(article), w);
  const auto citing = corpus.citing(article);
  const auto self = corpus.citing_self(article);
  std::size_t n = 0;
  for (std::size_t e = 0; e < citing.size(); ++e) {
    if (exclude_self && self[e]) continue;
    if (years.contains(corpus.year(citing[e]))) ++n;
  }
  return n;
}

/// Per-year in-window citation counts (ncits_{i,y}). Years without citations are absent.
inline std::map<int, std::size_t> citations_in_window(const Corpus& corpus, ArticleIndex article,
                                                      const WindowSpec& w, bool exclude_self) {
  const auto years = counted_years(corpus.year(article), w);
  const auto citing = corpus.citing(article);
  const auto self = corpus.citing_self(article);
  std::map<int, std::size_t> out;
  for (std::size_t e = 0; e < citing.size(); ++e) {
    if (exclude_self && self[e]) continue;
    const int y = corpus.year(citing[e]);
    if (years.contains(y)) ++out[y];
  }
  return out;
}

/// Number of references from `citing` that land in the backward population of its
/// publication year.
inline std::size_t in_window_reference_count(const Corpus& corpus, ArticleIndex citing,
                                             const WindowSpec& w, bool exclude_self) {
  detail::require(w, Direction::backward);
  const int ref_year = corpus.year(citing);
  const YearRange pop{ref_year - w.length, ref_year - 1};
  const auto refs = corpus.references(citing);
  const auto self = corpus.references_self(citing);
  std::size_t n = 0;
  for (std::size_t e = 0; e < refs.size(); ++e) {
    if (exclude_self && self[e]) continue;
    if (pop.contains(corpus.year(refs[e]))) ++n;
  }
  return n;
}

}  // namespace citeconc
