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
#include <charconv>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "citeconc/concentration.hpp"
#include "citeconc/corpus.hpp"
#include "citeconc/normalize.hpp"
#include "citeconc/windows.hpp"

namespace citeconc {

enum class Approach { citation_based, reference_based };

inline std::string_view to_string(Approach a) {
  return a == Approach::citation_based ? "citation_based" : "reference_based";
}

inline Approach parse_approach(std::string_view s) {
  if (s == "citation_based") return Approach::citation_based;
  if (s == "reference_based") return Approach::reference_based;
  throw ConfigError("study.approach must be 'citation_based' or 'reference_based', got '" +
                    std::string(s) + "'");
}

inline std::string_view to_string(RhoScope s) { return s == RhoScope::study ? "study" : "all_edges"; }

struct StudyConfig {
  Approach approach = Approach::citation_based;
  WindowSpec window = forward_window(5);
  bool include_uncited = true;
  bool exclude_self_citations = false;
  bool core_only = false;
  bool normalized = true;
  std::optional<std::string> field_filter;
  std::optional<std::string> region_removed;
  bool mics_per_year = false;
  RhoScope rho_scope = RhoScope::study;

  void validate() const {
    window.validate();
    const auto want = approach == Approach::citation_based ? Direction::forward : Direction::backward;
    if (window.direction != want) {
      throw ConfigError(std::string(to_string(approach)) + " requires a " +
                        std::string(to_string(want)) + " window");
    }
  }

  /// Key/value echo written next to every report.
  std::vector<std::pair<std::string, std::string>> echo() const {
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    std::vector<std::pair<std::string, std::string>> out{
        {"study.approach", std::string(to_string(approach))},
        {"window.direction", std::string(to_string(window.direction))},
        {"window.length", std::to_string(window.length)},
        {"window.drop_earliest_population", b(window.drop_earliest_population)},
        {"study.include_uncited", b(include_uncited)},
        {"study.exclude_self", b(exclude_self_citations)},
        {"study.core_only", b(core_only)},
        {"normalize.enabled", b(normalized)},
        {"normalize.mics_per_year", b(mics_per_year)},
        {"normalize.rho_scope", std::string(to_string(rho_scope))},
    };
    if (field_filter) out.emplace_back("study.field", *field_filter);
    if (region_removed) out.emplace_back("regions.remove", *region_removed);
    return out;
  }
};

/// One emitted row. `values` is aligned with SeriesReport::columns; a null value
/// carries a reason code.
struct SeriesRow {
  int year = 0;
  std::string group;
  std::size_t n = 0;
  std::size_t zero_count = 0;
  std::vector<std::optional<double>> values;
  std::string reason;

  friend bool operator==(const SeriesRow&, const SeriesRow&) = default;
};

struct SeriesReport {
  std::string study;
  /// Name of the grouping column ("region", "field", "point"), empty when ungrouped.
  std::string group_name;
  std::vector<std::string> columns;
  std::vector<SeriesRow> rows;
  std::vector<std::pair<std::string, std::string>> config;

  std::size_t column(std::string_view name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ConfigError("report has no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
  std::optional<double> value(std::size_t row, std::string_view name) const {
    return rows.at(row).values.at(column(name));
  }
  /// Rows for `year` (and `group` when non-empty).
  const SeriesRow* find(int year, std::string_view group = {}) const {
    for (const auto& r : rows) {
      if (r.year == year && (group.empty() || r.group == group)) return &r;
    }
    return nullptr;
  }

  friend bool operator==(const SeriesReport&, const SeriesReport&) = default;
};

namespace reason {
inline constexpr std::string_view empty_cohort = "empty_cohort";
inline constexpr std::string_view all_zero = "all_zero";
inline constexpr std::string_view zero_baseline = "zero_baseline";
inline constexpr std::string_view no_single_cited = "no_single_cited";
inline constexpr std::string_view no_top_citations = "no_top_citations";
}  // namespace reason

namespace detail {

/// Corpus after the optional core-journal and region-removal filters.
class PreparedCorpus {
 public:
  PreparedCorpus(const Corpus& source, bool core_only, const std::optional<std::string>& region) {
    if (core_only) owned_ = filter_core_journals(source);
    if (region) {
      const Corpus& base = owned_ ? *owned_ : source;
      if (!base.regions().find(*region)) throw ConfigError("unknown region '" + *region + "'");
      owned_ = remove_region(base, *region);
    }
    ptr_ = owned_ ? &*owned_ : &source;
  }
  PreparedCorpus(const PreparedCorpus&) = delete;
  PreparedCorpus& operator=(const PreparedCorpus&) = delete;

  const Corpus& operator*() const noexcept { return *ptr_; }
  const Corpus* operator->() const noexcept { return ptr_; }

 private:
  std::optional<Corpus> owned_;
  const Corpus* ptr_ = nullptr;
};

/// Fills n/zero_count/gini/uncited_share/mean_raw for a scored cohort.
inline SeriesRow concentration_row(int year, std::span<const double> scores,
                                   std::span<const std::uint32_t> raw, bool include_uncited) {
  SeriesRow row;
  row.year = year;
  row.n = scores.size();
  row.values.assign(3, std::nullopt);
  if (scores.empty()) {
    row.reason = reason::empty_cohort;
    return row;
  }
  std::vector<double> kept;
  kept.reserve(scores.size());
  double raw_sum = 0.0;
  for (std::size_t m = 0; m < scores.size(); ++m) {
    raw_sum += raw[m];
    if (scores[m] == 0.0) {
      ++row.zero_count;
      if (!include_uncited) continue;
    }
    kept.push_back(scores[m]);
  }
  row.values[1] = static_cast<double>(row.zero_count) / static_cast<double>(row.n);
  row.values[2] = raw_sum / static_cast<double>(row.n);
  if (row.zero_count == row.n) {
    row.reason = reason::all_zero;
    return row;
  }
  row.values[0] = gini(Distribution(std::move(kept)));
  return row;
}

inline std::optional<LabelId> field_id(const Corpus& c, const std::optional<std::string>& field) {
  if (!field) return std::nullopt;
  auto id = c.fields().find(*field);
  if (!id) throw ConfigError("unknown field '" + *field + "'");
  return id;
}

inline NicsOptions nics_options(const StudyConfig& cfg) {
  return {cfg.exclude_self_citations, cfg.mics_per_year, cfg.rho_scope};
}

/// Forward cohort scores for every eligible publication year, pooled.
inline NormalizedScore forward_scores(const Corpus& c, const WindowSpec& w,
                                      std::span<const ArticleIndex> cohort, const StudyConfig& cfg) {
  if (cohort.empty()) return {};
  auto s = nics(c, cohort, w, nics_options(cfg));
  if (!cfg.normalized) {
    for (std::size_t m = 0; m < s.size(); ++m) s.scores[m] = s.raw[m];
  }
  return s;
}

/// Calls fn(year, begin, end) for each eligible publication year with the
/// half-open member range of a pooled, year-ordered cohort.
template <class Fn>
void for_each_year(const Corpus& c, YearRange years, std::span<const ArticleIndex> cohort, Fn fn) {
  std::size_t pos = 0;
  for (int y = years.first; y <= years.last; ++y) {
    const auto begin = pos;
    while (pos < cohort.size() && c.year(cohort[pos]) == y) ++pos;
    fn(y, begin, pos);
  }
}

inline std::vector<ArticleIndex> eligible_members(const Corpus& c, const WindowSpec& w,
                                                  std::optional<LabelId> field) {
  auto cohort = eligible_cohort(c, w);
  if (field) std::erase_if(cohort, [&](ArticleIndex i) { return c.field(i) != *field; });
  return cohort;
}

inline std::string pct_column(double pct) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, pct);
  return "top_" + std::string(buf, p);
}

}  // namespace detail

/// Per-year Gini of the citation-based or reference-based cohort.
inline SeriesReport gini_series(const Corpus& corpus, const StudyConfig& cfg) {
  cfg.validate();
  detail::PreparedCorpus c(corpus, cfg.core_only, cfg.region_removed);
  const auto field = detail::field_id(*c, cfg.field_filter);

  SeriesReport rep;
  rep.study = "gini";
  rep.columns = {"gini", "uncited_share", "mean_raw_citations"};
  rep.config = cfg.echo();

  if (cfg.approach == Approach::citation_based) {
    const auto years = eligible_pub_years_forward(c->span(), cfg.window);
    const auto cohort = detail::eligible_members(*c, cfg.window, field);
    const auto scores = detail::forward_scores(*c, cfg.window, cohort, cfg);
    detail::for_each_year(*c, years, cohort, [&](int y, std::size_t b, std::size_t e) {
      rep.rows.push_back(detail::concentration_row(
          y, std::span(scores.scores).subspan(b, e - b), std::span(scores.raw).subspan(b, e - b),
          cfg.include_uncited));
    });
    return rep;
  }

  const auto years = analyzable_ref_years_backward(c->span(), cfg.window);
  const ReferenceOptions ropt{cfg.exclude_self_citations, cfg.normalized};
  for (int y = years.first; y <= years.last; ++y) {
    auto s = normalized_reference_scores(*c, y, cfg.window, ropt);
    if (field) {
      std::size_t out = 0;
      for (std::size_t m = 0; m < s.size(); ++m) {
        if (c->field(s.articles[m]) != *field) continue;
        s.scores[out] = s.scores[m];
        s.raw[out] = s.raw[m];
        ++out;
      }
      s.scores.resize(out);
      s.raw.resize(out);
    }
    rep.rows.push_back(detail::concentration_row(y, s.scores, s.raw, cfg.include_uncited));
  }
  return rep;
}

/// gini(last valid year) - gini(first valid year).
inline double end_to_end_change(const SeriesReport& report) {
  const auto col = report.column("gini");
  std::optional<double> first, last;
  std::size_t valid = 0;
  for (const auto& r : report.rows) {
    if (!r.values[col]) continue;
    if (!first) first = r.values[col];
    last = r.values[col];
    ++valid;
  }
  if (valid < 2) throw DomainError("end-to-end change needs at least two non-null Gini rows");
  return *last - *first;
}

/// Share of each eligible publication-year cohort with no in-window citation.
inline SeriesReport uncited_share_series(const Corpus& corpus, const WindowSpec& w, bool exclude_self,
                                         bool core_only = false) {
  detail::PreparedCorpus c(corpus, core_only, std::nullopt);
  SeriesReport rep;
  rep.study = "uncited";
  rep.columns = {"uncited_share"};
  StudyConfig echo;
  echo.window = w;
  echo.exclude_self_citations = exclude_self;
  echo.core_only = core_only;
  rep.config = echo.echo();
  const auto years = eligible_pub_years_forward(c->span(), w);
  for (int y = years.first; y <= years.last; ++y) {
    SeriesRow row;
    row.year = y;
    row.values.assign(1, std::nullopt);
    for (auto i : c->published_in(y)) {
      ++row.n;
      if (windowed_citation_count(*c, i, w, exclude_self) == 0) ++row.zero_count;
    }
    if (row.n == 0) {
      row.reason = reason::empty_cohort;
    } else {
      row.values[0] = static_cast<double>(row.zero_count) / static_cast<double>(row.n);
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

/// Signed relative change in uncited share after deleting a region's articles and
/// every reference they make.
inline SeriesReport region_removal_uncitedness(const Corpus& corpus, std::string_view region,
                                               const WindowSpec& w, bool exclude_self = false,
                                               bool core_only = false) {
  detail::PreparedCorpus c(corpus, core_only, std::nullopt);
  if (!c->regions().find(region)) throw ConfigError("unknown region '" + std::string(region) + "'");
  const Corpus residual = remove_region(*c, region);
  if (residual.num_articles() == 0) throw DomainError("empty residual corpus");

  const auto base = uncited_share_series(*c, w, exclude_self);
  const auto rest = uncited_share_series(residual, w, exclude_self);
  SeriesReport rep;
  rep.study = "region_removal";
  rep.columns = {"baseline_uncited_share", "residual_uncited_share", "relative_change"};
  rep.config = base.config;
  rep.config.emplace_back("regions.remove", std::string(region));
  for (std::size_t k = 0; k < base.rows.size(); ++k) {
    const auto& b = base.rows[k];
    const auto& r = rest.rows[k];
    SeriesRow row;
    row.year = b.year;
    row.n = r.n;
    row.zero_count = r.zero_count;
    row.values = {b.values[0], r.values[0], std::nullopt};
    if (!b.values[0] || !r.values[0]) {
      row.reason = reason::empty_cohort;
    } else if (*b.values[0] == 0.0) {
      row.reason = reason::zero_baseline;
    } else {
      row.values[2] = (*r.values[0] - *b.values[0]) / *b.values[0];
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

struct TailOptions {
  bool exclude_self = true;
  bool normalized = true;
  /// Count distinct citing articles instead of citing edges.
  bool article_level = false;
  double top_pct = 0.01;
  bool core_only = false;
};

/// Per year and region: shares of single-cited articles, top articles, and of the
/// citations that reach each of those groups.
inline SeriesReport region_tail_shares(const Corpus& corpus, const WindowSpec& w,
                                       const TailOptions& opt = {}) {
  detail::PreparedCorpus c(corpus, opt.core_only, std::nullopt);
  SeriesReport rep;
  rep.study = "region_tail";
  rep.group_name = "region";
  rep.columns = {"cited_low", "cited_top", "citing_low", "citing_top"};
  StudyConfig echo;
  echo.window = w;
  echo.exclude_self_citations = opt.exclude_self;
  echo.normalized = opt.normalized;
  echo.core_only = opt.core_only;
  rep.config = echo.echo();
  rep.config.emplace_back("tail.article_level", opt.article_level ? "true" : "false");

  const auto nregions = c->regions().size();
  std::vector<LabelId> region_order(nregions);
  std::iota(region_order.begin(), region_order.end(), LabelId{0});
  std::sort(region_order.begin(), region_order.end(),
            [&](LabelId a, LabelId b) { return c->regions()[a] < c->regions()[b]; });

  const auto years = eligible_pub_years_forward(c->span(), w);
  const auto cohort = eligible_cohort(*c, w);
  StudyConfig scfg = echo;
  const auto scores = detail::forward_scores(*c, w, cohort, scfg);

  detail::for_each_year(*c, years, cohort, [&](int y, std::size_t b, std::size_t e) {
    // counts[metric][region]
    std::vector<std::vector<double>> counts(4, std::vector<double>(nregions, 0.0));
    const auto window = counted_years(y, w);
    std::size_t zeros = 0;
    auto tally_citers = [&](ArticleIndex cited, std::vector<double>& into, std::set<ArticleIndex>& seen,
                            bool single_only) {
      const auto citing = c->citing(cited);
      const auto self = c->citing_self(cited);
      for (std::size_t k = 0; k < citing.size(); ++k) {
        if (opt.exclude_self && self[k]) continue;
        if (!window.contains(c->year(citing[k]))) continue;
        if (opt.article_level) {
          if (seen.insert(citing[k]).second) into[c->region(citing[k])] += 1.0;
        } else {
          into[c->region(citing[k])] += 1.0;
        }
        if (single_only) break;
      }
    };
    std::set<ArticleIndex> seen_low, seen_top;
    for (std::size_t m = b; m < e; ++m) {
      if (scores.raw[m] == 0) ++zeros;
      if (scores.raw[m] != 1) continue;
      counts[0][c->region(cohort[m])] += 1.0;
      tally_citers(cohort[m], counts[2], seen_low, true);
    }
    const auto year_scores = std::span(scores.scores).subspan(b, e - b);
    const bool any_cited = std::any_of(year_scores.begin(), year_scores.end(), [](double s) { return s > 0; });
    if (any_cited) {
      const auto top = top_members(year_scores, opt.top_pct, [&](std::size_t x, std::size_t z) {
        return c->id(cohort[b + x]) < c->id(cohort[b + z]);
      });
      for (auto t : top) {
        counts[1][c->region(cohort[b + t])] += 1.0;
        tally_citers(cohort[b + t], counts[3], seen_top, false);
      }
    }
    std::vector<double> totals(4, 0.0);
    for (std::size_t k = 0; k < 4; ++k) {
      for (double v : counts[k]) totals[k] += v;
    }
    for (auto r : region_order) {
      SeriesRow row;
      row.year = y;
      row.group = c->regions()[r];
      row.n = e - b;
      row.zero_count = zeros;
      row.values.assign(4, std::nullopt);
      std::vector<std::string> reasons;
      for (std::size_t k = 0; k < 4; ++k) {
        if (totals[k] > 0.0) row.values[k] = counts[k][r] / totals[k];
      }
      if (e == b) {
        reasons.emplace_back(reason::empty_cohort);
      } else {
        if (totals[0] == 0.0) reasons.emplace_back(reason::no_single_cited);
        if (totals[1] == 0.0) reasons.emplace_back(reason::all_zero);
        else if (totals[3] == 0.0) reasons.emplace_back(reason::no_top_citations);
      }
      for (std::size_t k = 0; k < reasons.size(); ++k) row.reason += (k ? ";" : "") + reasons[k];
      rep.rows.push_back(std::move(row));
    }
  });
  return rep;
}

/// Share of each cohort's raw in-window citations held by its top pct articles.
inline SeriesReport top_share_series(const Corpus& corpus, const WindowSpec& w,
                                     std::span<const double> pcts, bool exclude_self = false,
                                     bool core_only = false) {
  for (double p : pcts) top_count(1, p);
  detail::PreparedCorpus c(corpus, core_only, std::nullopt);
  SeriesReport rep;
  rep.study = "top_share";
  for (double p : pcts) rep.columns.push_back(detail::pct_column(p));
  StudyConfig echo;
  echo.window = w;
  echo.exclude_self_citations = exclude_self;
  echo.core_only = core_only;
  echo.normalized = false;
  rep.config = echo.echo();
  const auto years = eligible_pub_years_forward(c->span(), w);
  for (int y = years.first; y <= years.last; ++y) {
    SeriesRow row;
    row.year = y;
    row.values.assign(pcts.size(), std::nullopt);
    std::vector<double> raw;
    for (auto i : c->published_in(y)) {
      raw.push_back(static_cast<double>(windowed_citation_count(*c, i, w, exclude_self)));
      if (raw.back() == 0.0) ++row.zero_count;
    }
    row.n = raw.size();
    if (row.n == 0) {
      row.reason = reason::empty_cohort;
    } else if (row.zero_count == row.n) {
      row.reason = reason::all_zero;
    } else {
      const Distribution d(std::move(raw));
      for (std::size_t k = 0; k < pcts.size(); ++k) row.values[k] = top_share(d, pcts[k]);
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

/// gini_series restricted to each field label of the (filtered) corpus.
inline std::map<std::string, SeriesReport> gini_by_field(const Corpus& corpus, const StudyConfig& cfg) {
  cfg.validate();
  detail::PreparedCorpus c(corpus, cfg.core_only, cfg.region_removed);
  std::map<std::string, SeriesReport> out;
  for (const auto& label : c->fields().labels()) {
    StudyConfig f = cfg;
    f.core_only = false;
    f.region_removed.reset();
    f.field_filter = label;
    auto rep = gini_series(*c, f);
    rep.study = "gini_by_field";
    rep.config = cfg.echo();
    rep.config.emplace_back("study.field", label);
    out.emplace(label, std::move(rep));
  }
  return out;
}

/// Lorenz curves of each cohort, `points` intervals per year.
inline SeriesReport lorenz_series(const Corpus& corpus, const StudyConfig& cfg, int points = 20) {
  cfg.validate();
  detail::PreparedCorpus c(corpus, cfg.core_only, cfg.region_removed);
  const auto field = detail::field_id(*c, cfg.field_filter);
  SeriesReport rep;
  rep.study = "lorenz";
  rep.group_name = "point";
  rep.columns = {"p", "L"};
  rep.config = cfg.echo();
  rep.config.emplace_back("lorenz.points", std::to_string(points));

  auto emit = [&](int y, std::span<const double> scores) {
    std::vector<double> kept;
    std::size_t zeros = 0;
    for (double s : scores) {
      if (s == 0.0) {
        ++zeros;
        if (!cfg.include_uncited) continue;
      }
      kept.push_back(s);
    }
    const std::size_t n = scores.size();
    if (n == 0 || zeros == n) {
      SeriesRow row{y, "", n, zeros, {std::nullopt, std::nullopt},
                    std::string(n == 0 ? reason::empty_cohort : reason::all_zero)};
      rep.rows.push_back(std::move(row));
      return;
    }
    const auto curve = lorenz(Distribution(std::move(kept)), points);
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
      rep.rows.push_back({y, std::to_string(k), n, zeros, {curve.points[k].p, curve.points[k].L}, ""});
    }
  };

  if (cfg.approach == Approach::citation_based) {
    const auto years = eligible_pub_years_forward(c->span(), cfg.window);
    const auto cohort = detail::eligible_members(*c, cfg.window, field);
    const auto scores = detail::forward_scores(*c, cfg.window, cohort, cfg);
    detail::for_each_year(*c, years, cohort, [&](int y, std::size_t b, std::size_t e) {
      emit(y, std::span(scores.scores).subspan(b, e - b));
    });
  } else {
    const auto years = analyzable_ref_years_backward(c->span(), cfg.window);
    for (int y = years.first; y <= years.last; ++y) {
      auto s = normalized_reference_scores(*c, y, cfg.window, {cfg.exclude_self_citations, cfg.normalized});
      std::vector<double> v;
      for (std::size_t m = 0; m < s.size(); ++m) {
        if (!field || c->field(s.articles[m]) == *field) v.push_back(s.scores[m]);
      }
      emit(y, v);
    }
  }
  return rep;
}

}  // namespace citeconc
