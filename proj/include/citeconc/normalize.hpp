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

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "citeconc/corpus.hpp"
#include "citeconc/windows.hpp"

namespace citeconc {

/// Which edges enter the citation-inflation totals ncits_y.
enum class RhoScope {
  study,      // same self-citation scope as the study
  all_edges,  // every retained edge
};

/// rho_y = 1 / ncits_y for every year with at least one citation.
class YearWeights {
 public:
  YearWeights() = default;
  YearWeights(YearRange span, std::vector<double> rho) : span_(span), rho_(std::move(rho)) {}

  std::optional<double> find(int year) const {
    if (!span_.contains(year)) return std::nullopt;
    const double r = rho_[static_cast<std::size_t>(year - span_.first)];
    if (r == 0.0) return std::nullopt;
    return r;
  }
  /// rho_y, or 0 for years without citations.
  double at(int year) const {
    return span_.contains(year) ? rho_[static_cast<std::size_t>(year - span_.first)] : 0.0;
  }
  std::map<int, double> to_map() const {
    std::map<int, double> m;
    for (int y = span_.first; y <= span_.last; ++y) {
      if (auto r = find(y)) m.emplace(y, *r);
    }
    return m;
  }
  YearWeights scaled(double c) const {
    auto copy = *this;
    for (auto& r : copy.rho_) r *= c;
    return copy;
  }

 private:
  YearRange span_{};
  std::vector<double> rho_;
};

inline YearWeights year_weights(const Corpus& corpus, bool exclude_self) {
  const auto span = corpus.span();
  std::vector<double> rho(static_cast<std::size_t>(span.size()), 0.0);
  for (int y = span.first; y <= span.last; ++y) {
    const auto n = corpus.edges_in_year(y, exclude_self);
    if (n > 0) rho[static_cast<std::size_t>(y - span.first)] = 1.0 / static_cast<double>(n);
  }
  return {span, std::move(rho)};
}

/// ics_i: in-window citations weighted by the citing year's rho.
inline double ics(const Corpus& corpus, ArticleIndex article, const WindowSpec& w,
                  const YearWeights& weights, bool exclude_self) {
  const auto years = counted_years(corpus.year(article), w);
  const auto citing = corpus.citing(article);
  const auto self = corpus.citing_self(article);
  double sum = 0.0;
  for (std::size_t e = 0; e < citing.size(); ++e) {
    if (exclude_self && self[e]) continue;
    const int y = corpus.year(citing[e]);
    if (years.contains(y)) sum += weights.at(y);
  }
  return sum;
}

struct NicsOptions {
  bool exclude_self = false;
  /// Field means per (field, publication year) instead of pooled over the cohort.
  bool mics_per_year = false;
  RhoScope rho_scope = RhoScope::study;
};

/// Field baselines used by a scoring pass. Keys are (field, year); the year is
/// kPooled when the mean is taken over every publication year of the cohort.
struct FieldBaseline {
  static constexpr int kPooled = -1;

  std::map<std::pair<LabelId, int>, double> mics;
  std::map<LabelId, double> mref;
};

/// Scores for a cohort, aligned with `articles`.
struct NormalizedScore {
  std::vector<ArticleIndex> articles;
  std::vector<double> scores;
  /// Raw in-window citation counts (forward) or raw citation counts from the
  /// reference year (backward).
  std::vector<std::uint32_t> raw;
  FieldBaseline baseline;

  std::size_t size() const noexcept { return articles.size(); }
};

/// Computes raw windowed counts and ics for each cohort member in one pass.
inline void windowed_scores(const Corpus& corpus, std::span<const ArticleIndex> cohort,
                            const WindowSpec& w, const YearWeights& weights, bool exclude_self,
                            std::vector<std::uint32_t>& raw, std::vector<double>& ics_out) {
  raw.assign(cohort.size(), 0);
  ics_out.assign(cohort.size(), 0.0);
  for (std::size_t m = 0; m < cohort.size(); ++m) {
    const auto years = counted_years(corpus.year(cohort[m]), w);
    const auto citing = corpus.citing(cohort[m]);
    const auto self = corpus.citing_self(cohort[m]);
    std::uint32_t n = 0;
    double sum = 0.0;
    for (std::size_t e = 0; e < citing.size(); ++e) {
      if (exclude_self && self[e]) continue;
      const int y = corpus.year(citing[e]);
      if (years.contains(y)) {
        ++n;
        sum += weights.at(y);
      }
    }
    raw[m] = n;
    ics_out[m] = sum;
  }
}

/// nics_i = ics_i / mics_k with the supplied year weights.
inline NormalizedScore nics(const Corpus& corpus, std::span<const ArticleIndex> cohort,
                            const WindowSpec& w, const YearWeights& weights,
                            const NicsOptions& opt) {
  if (cohort.empty()) throw DomainError("empty cohort");
  NormalizedScore out;
  out.articles.assign(cohort.begin(), cohort.end());
  std::vector<double> ics_values;
  windowed_scores(corpus, cohort, w, weights, opt.exclude_self, out.raw, ics_values);

  auto key = [&](ArticleIndex i) {
    return std::pair<LabelId, int>{corpus.field(i),
                                   opt.mics_per_year ? corpus.year(i) : FieldBaseline::kPooled};
  };
  std::map<std::pair<LabelId, int>, std::pair<double, std::size_t>> acc;
  for (std::size_t m = 0; m < cohort.size(); ++m) {
    auto& [sum, n] = acc[key(cohort[m])];
    sum += ics_values[m];
    ++n;
  }
  for (const auto& [k, v] : acc) out.baseline.mics.emplace(k, v.first / static_cast<double>(v.second));

  out.scores.resize(cohort.size());
  for (std::size_t m = 0; m < cohort.size(); ++m) {
    const double mean = out.baseline.mics.at(key(cohort[m]));
    out.scores[m] = mean > 0.0 ? ics_values[m] / mean : 0.0;
  }
  return out;
}

inline NormalizedScore nics(const Corpus& corpus, std::span<const ArticleIndex> cohort,
                            const WindowSpec& w, const NicsOptions& opt) {
  const bool rho_excludes_self = opt.rho_scope == RhoScope::study && opt.exclude_self;
  return nics(corpus, cohort, w, year_weights(corpus, rho_excludes_self), opt);
}

/// Every article whose forward window fits in the span, across all eligible years.
inline std::vector<ArticleIndex> eligible_cohort(const Corpus& corpus, const WindowSpec& w) {
  const auto years = eligible_pub_years_forward(corpus.span(), w);
  const auto pool = corpus.published_between(years);
  return {pool.begin(), pool.end()};
}

/// mref_k per field for articles published in `ref_year`; NaN for fields without
/// articles in that year.
inline std::vector<double> reference_baseline(const Corpus& corpus, int ref_year, const WindowSpec& w,
                                              bool exclude_self) {
  detail::require(w, Direction::backward);
  const auto nf = corpus.fields().size();
  std::vector<double> sum(nf, 0.0);
  std::vector<std::size_t> count(nf, 0);
  for (auto i : corpus.published_in(ref_year)) {
    sum[corpus.field(i)] += static_cast<double>(in_window_reference_count(corpus, i, w, exclude_self));
    ++count[corpus.field(i)];
  }
  std::vector<double> mref(nf, std::nan(""));
  for (std::size_t k = 0; k < nf; ++k) {
    if (count[k]) mref[k] = sum[k] / static_cast<double>(count[k]);
  }
  return mref;
}

/// Mean in-window reference count of a field's articles published in `ref_year`.
inline double field_mean_references(const Corpus& corpus, std::string_view field, int ref_year,
                                    const WindowSpec& w, bool exclude_self) {
  auto k = corpus.fields().find(field);
  if (!k || corpus.article_count(*k, ref_year) == 0) throw DomainError("empty field-year cell");
  return reference_baseline(corpus, ref_year, w, exclude_self)[*k];
}

struct ReferenceOptions {
  bool exclude_self = false;
  /// When false every citation counts 1 instead of 1/mref_k.
  bool normalized = true;
};

/// nref_i^norm: citations received by `cited` from articles published in `ref_year`,
/// each weighted by 1/mref of the citing article's field.
inline double normalized_reference_count(const Corpus& corpus, ArticleIndex cited, int ref_year,
                                         const WindowSpec& w, const std::vector<double>& mref,
                                         const ReferenceOptions& opt) {
  detail::require(w, Direction::backward);
  const auto citing = corpus.citing(cited);
  const auto self = corpus.citing_self(cited);
  double sum = 0.0;
  for (std::size_t e = 0; e < citing.size(); ++e) {
    if (opt.exclude_self && self[e]) continue;
    if (corpus.year(citing[e]) != ref_year) continue;
    sum += opt.normalized ? 1.0 / mref[corpus.field(citing[e])] : 1.0;
  }
  return sum;
}

inline double normalized_reference_count(const Corpus& corpus, ArticleIndex cited, int ref_year,
                                         const WindowSpec& w, const ReferenceOptions& opt) {
  const auto mref = reference_baseline(corpus, ref_year, w, opt.exclude_self);
  return normalized_reference_count(corpus, cited, ref_year, w, mref, opt);
}

/// Scores the whole backward population of `ref_year`. Members are ordered by
/// publication year then index. Throws DomainError when the year is not analyzable.
inline NormalizedScore normalized_reference_scores(const Corpus& corpus, int ref_year,
                                                   const WindowSpec& w, const ReferenceOptions& opt) {
  const auto pop_years = cited_population_backward(ref_year, corpus.span(), w);
  if (!pop_years) throw DomainError("reference year " + std::to_string(ref_year) + " is not analyzable");
  const auto mref = reference_baseline(corpus, ref_year, w, opt.exclude_self);
  const auto pop = corpus.published_between(*pop_years);
  const auto base = corpus.year_order_offset(pop_years->first);

  NormalizedScore out;
  out.articles.assign(pop.begin(), pop.end());
  out.scores.assign(pop.size(), 0.0);
  out.raw.assign(pop.size(), 0);
  for (std::size_t k = 0; k < mref.size(); ++k) {
    if (!std::isnan(mref[k])) out.baseline.mref.emplace(static_cast<LabelId>(k), mref[k]);
  }
  for (auto citing : corpus.published_in(ref_year)) {
    const auto refs = corpus.references(citing);
    const auto self = corpus.references_self(citing);
    const double weight = opt.normalized ? 1.0 / mref[corpus.field(citing)] : 1.0;
    for (std::size_t e = 0; e < refs.size(); ++e) {
      if (opt.exclude_self && self[e]) continue;
      if (!pop_years->contains(corpus.year(refs[e]))) continue;
      const auto pos = corpus.year_order_position(refs[e]) - base;
      out.scores[pos] += weight;
      ++out.raw[pos];
    }
  }
  return out;
}

}  // namespace citeconc
