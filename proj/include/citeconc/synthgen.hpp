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
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citeconc/corpus.hpp"

namespace citeconc {

/// Value that moves from `start` (first span year) to `end` (last span year),
/// linearly or geometrically. Years outside the span take the nearest end value.
struct Schedule {
  double start = 0.0;
  double end = 0.0;
  bool geometric = false;

  static Schedule constant(double v) { return {v, v, false}; }
  bool flat() const noexcept { return start == end; }
  double at(int year, YearRange span) const {
    if (span.size() <= 1) return start;
    const double t = std::clamp(
        static_cast<double>(year - span.first) / static_cast<double>(span.last - span.first), 0.0, 1.0);
    if (geometric && start > 0.0 && end > 0.0) return start * std::pow(end / start, t);
    return start + (end - start) * t;
  }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Categorical label with a share that may drift over the span and a multiplier on
/// the reference-list length of its articles.
struct MixEntry {
  std::string label;
  Schedule share;
  double refs_scale = 1.0;

  friend bool operator==(const MixEntry&, const MixEntry&) = default;
};

struct GenParams {
  YearRange span{1980, 2020};
  Schedule articles_per_year = Schedule::constant(1000);
  Schedule refs_per_article = Schedule::constant(10);
  /// Target weight is (in_degree + attachment_offset)^attachment_exponent times the
  /// recency decay; exponent 0 gives uniform attachment.
  double attachment_offset = 1.0;
  double attachment_exponent = 1.0;
  std::optional<double> recency_halflife;
  std::vector<MixEntry> field_mix;
  std::vector<MixEntry> region_mix;
  double self_citation_rate = 0.02;
  /// Probability that an author slot is filled from the region's existing authors.
  double author_reuse = 0.6;
  int max_authors = 3;
  int journals_per_field = 4;
  /// Years simulated before the span with first-year schedules. Their articles are
  /// citable but not emitted, so references to them fall outside the corpus.
  int warmup_years = 0;
  std::uint64_t seed = 1;

  void validate() const {
    if (span.empty()) throw ConfigError("generator span is empty");
    auto check_schedule = [](const Schedule& s, const char* name) {
      if (!(s.start >= 0.0) || !(s.end >= 0.0)) throw ConfigError(std::string(name) + " must be non-negative");
    };
    check_schedule(articles_per_year, "articles_per_year");
    check_schedule(refs_per_article, "refs_per_article");
    if (!(attachment_offset >= 0.0)) throw ConfigError("attachment offset must be >= 0");
    if (!(attachment_exponent >= 0.0)) throw ConfigError("attachment exponent must be >= 0");
    if (recency_halflife && !(*recency_halflife > 0.0)) throw ConfigError("recency half-life must be > 0");
    auto check_mix = [](const std::vector<MixEntry>& mix, const char* name) {
      if (mix.empty()) throw ConfigError(std::string(name) + " is empty");
      double a = 0.0, b = 0.0;
      for (const auto& e : mix) {
        if (e.label.empty()) throw ConfigError(std::string(name) + " has an empty label");
        if (e.share.start < 0.0 || e.share.end < 0.0 || e.refs_scale < 0.0) {
          throw ConfigError(std::string(name) + " entries must be non-negative");
        }
        a += e.share.start;
        b += e.share.end;
      }
      if (std::abs(a - 1.0) > 1e-9 || std::abs(b - 1.0) > 1e-9) {
        throw ConfigError(std::string(name) + " probabilities must sum to 1");
      }
    };
    check_mix(field_mix, "field_mix");
    check_mix(region_mix, "region_mix");
    if (self_citation_rate < 0.0 || self_citation_rate > 1.0) throw ConfigError("self_citation_rate must lie in [0, 1]");
    if (author_reuse < 0.0 || author_reuse > 1.0) throw ConfigError("author_reuse must lie in [0, 1]");
    if (max_authors < 1) throw ConfigError("max_authors must be >= 1");
    if (journals_per_field < 1) throw ConfigError("journals_per_field must be >= 1");
    if (warmup_years < 0) throw ConfigError("warmup_years must be >= 0");
  }

  friend bool operator==(const GenParams&, const GenParams&) = default;
};

struct GenStats {
  std::size_t articles = 0;
  std::size_t edges = 0;
  std::size_t requested_refs = 0;
  /// Articles whose reference count was cut to the number of available prior articles.
  std::size_t clamped_articles = 0;
  /// Injected self-citations that became corpus edges.
  std::size_t injected_self_citations = 0;
  /// References drawn to warm-up articles, which are not part of the corpus.
  std::size_t external_refs = 0;
};

namespace detail {

/// Fenwick tree over non-negative weights with weighted sampling by descent.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n = 0) : tree_(n + 1, 0.0), size_(n) {
    for (mask_ = 1; mask_ * 2 <= n; mask_ *= 2) {}
  }

  void add(std::size_t i, double delta) {
    for (++i; i <= size_; i += i & (~i + 1)) tree_[i] += delta;
  }

  double total() const {
    double s = 0.0;
    for (std::size_t i = size_; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

  /// Smallest index whose inclusive prefix sum exceeds `target`.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    for (std::size_t step = mask_; step > 0; step >>= 1) {
      const auto next = pos + step;
      if (next <= size_ && tree_[next] <= target) {
        pos = next;
        target -= tree_[next];
      }
    }
    return std::min(pos, size_ ? size_ - 1 : 0);
  }

  std::size_t size() const noexcept { return size_; }

 private:
  std::vector<double> tree_;
  std::size_t size_ = 0;
  std::size_t mask_ = 0;
};

/// mt19937_64 with platform-independent conversions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

inline std::size_t pick(std::span<const double> weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  double target = u * total;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (target < weights[k]) return k;
    target -= weights[k];
  }
  for (std::size_t k = weights.size(); k-- > 0;) {
    if (weights[k] > 0.0) return k;
  }
  return 0;
}

inline std::size_t stochastic_round(double x, Rng& rng) {
  if (x <= 0.0) return 0;
  const double f = std::floor(x);
  return static_cast<std::size_t>(f) + (rng.chance(x - f) ? 1 : 0);
}

inline std::string padded_id(char prefix, std::size_t n) {
  std::string digits = std::to_string(n);
  if (digits.size() < 7) digits.insert(0, 7 - digits.size(), '0');
  return prefix + digits;
}

}  // namespace detail

/// Grows a citation corpus year by year with preferential attachment.
///
/// Each new article draws its references without replacement from articles of
/// earlier years, with weight (in_degree + a)^exponent times a recency decay. A
/// fraction of reference slots is redirected to an earlier article of one of the
/// citing article's own authors.
inline Corpus generate(const GenParams& params, GenStats* stats = nullptr) {
  params.validate();
  detail::Rng rng(params.seed);
  const auto span = params.span;
  const auto warmup = static_cast<std::size_t>(params.warmup_years);
  const auto nyears = static_cast<std::size_t>(span.size()) + warmup;
  const int first_year = span.first - params.warmup_years;

  CorpusOptions copt;
  copt.span = span;
  for (const auto& r : params.region_mix) copt.regions.push_back(r.label);
  CorpusBuilder builder(copt);

  // Planned article counts fix every bucket size up front.
  std::vector<std::size_t> per_year(nyears);
  for (std::size_t y = 0; y < nyears; ++y) {
    per_year[y] = static_cast<std::size_t>(
        std::llround(params.articles_per_year.at(first_year + static_cast<int>(y), span)));
  }
  std::vector<std::size_t> year_start(nyears + 1, 0);
  for (std::size_t y = 0; y < nyears; ++y) year_start[y + 1] = year_start[y] + per_year[y];
  const std::size_t total_articles = year_start[nyears];
  const std::size_t hidden = year_start[warmup];

  std::vector<detail::WeightTree> buckets;
  buckets.reserve(nyears);
  for (auto n : per_year) buckets.emplace_back(n);
  std::vector<double> bucket_total(nyears, 0.0);
  std::vector<double> weight(total_articles, 0.0);
  std::vector<std::uint32_t> in_degree(total_articles, 0);
  std::vector<std::size_t> year_of_article(total_articles);

  const double a = params.attachment_offset;
  const double expo = params.attachment_exponent;
  auto attach_weight = [&](std::uint32_t deg) {
    const double base = static_cast<double>(deg) + a;
    if (expo == 0.0) return 1.0;
    if (expo == 1.0) return base;
    return std::pow(base, expo);
  };
  auto set_weight = [&](std::size_t i, double w) {
    const auto y = year_of_article[i];
    const double delta = w - weight[i];
    weight[i] = w;
    buckets[y].add(i - year_start[y], delta);
    bucket_total[y] += delta;
  };

  std::vector<double> decay(nyears, 1.0);
  if (params.recency_halflife) {
    for (std::size_t age = 0; age < nyears; ++age) {
      decay[age] = std::pow(0.5, static_cast<double>(age) / *params.recency_halflife);
    }
  }

  // Field/region labels and journals.
  std::vector<std::vector<std::string>> journals(params.field_mix.size());
  for (std::size_t f = 0; f < params.field_mix.size(); ++f) {
    for (int j = 0; j < params.journals_per_field; ++j) {
      journals[f].push_back(params.field_mix[f].label + "-J" + std::to_string(j + 1));
    }
  }
  std::vector<std::vector<std::uint32_t>> region_authors(params.region_mix.size());
  std::vector<std::vector<std::uint32_t>> author_articles;
  std::vector<std::string> author_names;

  GenStats st;
  std::vector<double> mix_weights;
  std::vector<std::uint32_t> authors;
  std::vector<std::string_view> author_views;
  std::vector<std::size_t> chosen;
  std::vector<double> bucket_weights(nyears, 0.0);

  for (std::size_t y = 0; y < nyears; ++y) {
    const int year = first_year + static_cast<int>(y);
    // Re-sync running bucket totals with the trees once per year.
    for (std::size_t b = 0; b < y; ++b) bucket_total[b] = buckets[b].total();
    const std::size_t prior = year_start[y];
    const double refs_mean = params.refs_per_article.at(year, span);

    for (std::size_t k = 0; k < per_year[y]; ++k) {
      const std::size_t idx = year_start[y] + k;
      year_of_article[idx] = y;

      mix_weights.clear();
      for (const auto& f : params.field_mix) mix_weights.push_back(f.share.at(year, span));
      const auto field = detail::pick(mix_weights, rng.uniform());
      mix_weights.clear();
      for (const auto& r : params.region_mix) mix_weights.push_back(r.share.at(year, span));
      const auto region = detail::pick(mix_weights, rng.uniform());
      const auto& journal = journals[field][rng.below(journals[field].size())];

      authors.clear();
      const auto n_authors = 1 + rng.below(static_cast<std::size_t>(params.max_authors));
      auto& pool = region_authors[region];
      for (std::size_t s = 0; s < n_authors; ++s) {
        std::uint32_t author;
        if (!pool.empty() && rng.chance(params.author_reuse)) {
          author = pool[rng.below(pool.size())];
        } else {
          author = static_cast<std::uint32_t>(author_names.size());
          author_names.push_back(detail::padded_id('u', author));
          author_articles.emplace_back();
          pool.push_back(author);
        }
        if (std::find(authors.begin(), authors.end(), author) == authors.end()) authors.push_back(author);
      }

      const double scale = params.field_mix[field].refs_scale * params.region_mix[region].refs_scale;
      std::size_t want = detail::stochastic_round(refs_mean * scale * (0.5 + rng.uniform()), rng);
      if (idx >= hidden) st.requested_refs += want;
      if (want > prior) {
        want = prior;
        if (idx >= hidden) ++st.clamped_articles;
      }

      chosen.clear();
      auto take = [&](std::size_t target) {
        chosen.push_back(target);
        set_weight(target, 0.0);
      };
      auto is_chosen = [&](std::size_t target) {
        return std::find(chosen.begin(), chosen.end(), target) != chosen.end();
      };
      while (chosen.size() < want) {
        if (params.self_citation_rate > 0.0 && rng.chance(params.self_citation_rate)) {
          const auto& mine = author_articles[authors[rng.below(authors.size())]];
          const auto earlier = static_cast<std::size_t>(
              std::lower_bound(mine.begin(), mine.end(), static_cast<std::uint32_t>(prior)) - mine.begin());
          if (earlier > 0) {
            const std::size_t target = mine[rng.below(earlier)];
            if (!is_chosen(target)) {
              take(target);
              if (idx >= hidden && target >= hidden) ++st.injected_self_citations;
              continue;
            }
          }
        }
        for (std::size_t b = 0; b < y; ++b) bucket_weights[b] = bucket_total[b] * decay[y - b];
        double sum = 0.0;
        for (std::size_t b = 0; b < y; ++b) sum += std::max(bucket_weights[b], 0.0);
        std::size_t target = 0;
        if (sum <= 0.0) {
          // No attachment mass left (offset 0 with no citations yet): uniform draw.
          do {
            target = rng.below(prior);
          } while (is_chosen(target));
        } else {
          for (std::size_t b = 0; b < y; ++b) bucket_weights[b] = std::max(bucket_weights[b], 0.0);
          const auto b = detail::pick(std::span<const double>(bucket_weights).first(y), rng.uniform());
          const auto& tree = buckets[b];
          std::size_t pos = tree.find(rng.uniform() * bucket_total[b]);
          target = year_start[b] + pos;
          if (weight[target] <= 0.0) {
            // Rounding landed on a removed entry: take the next live one in the bucket.
            std::size_t probe = 0;
            while (probe < tree.size() && weight[year_start[b] + (pos + probe) % tree.size()] <= 0.0) ++probe;
            if (probe == tree.size()) {
              bucket_total[b] = 0.0;
              continue;
            }
            target = year_start[b] + (pos + probe) % tree.size();
          }
        }
        take(target);
      }
      for (auto t : chosen) {
        ++in_degree[t];
        set_weight(t, attach_weight(in_degree[t]));
      }

      author_views.clear();
      for (auto au : authors) {
        author_articles[au].push_back(static_cast<std::uint32_t>(idx));
        author_views.push_back(author_names[au]);
      }
      if (idx < hidden) continue;
      builder.add_article(detail::padded_id('A', idx - hidden), year, params.field_mix[field].label,
                          params.region_mix[region].label, journal, author_views);
      std::sort(chosen.begin(), chosen.end());
      for (auto t : chosen) {
        if (t < hidden) {
          ++st.external_refs;
          continue;
        }
        builder.add_edge(static_cast<ArticleIndex>(idx - hidden), static_cast<ArticleIndex>(t - hidden));
        ++st.edges;
      }
    }
    // The year's articles become citable from next year on.
    for (std::size_t k = 0; k < per_year[y]; ++k) set_weight(year_start[y] + k, attach_weight(0));
  }
  st.articles = total_articles - hidden;
  if (stats) *stats = st;
  return std::move(builder).build();
}

/// Names accepted by scenario().
inline std::vector<std::string> scenario_names() {
  return {"declining-uncitedness", "region-shift", "stationary"};
}

namespace detail {

inline std::vector<MixEntry> default_fields() {
  return {{"Physics", Schedule::constant(0.35), 1.2},
          {"Medicine", Schedule::constant(0.45), 1.0},
          {"SocialSciences", Schedule::constant(0.20), 0.7}};
}

inline std::vector<MixEntry> flat_regions() {
  return {{"NorthAmerica", Schedule::constant(0.40), 1.0},
          {"Europe", Schedule::constant(0.30), 1.0},
          {"Asia", Schedule::constant(0.20), 1.0},
          {"Africa", Schedule::constant(0.05), 1.0},
          {"Other", Schedule::constant(0.05), 1.0}};
}

}  // namespace detail

/// Named parameter presets.
inline GenParams scenario(std::string_view name) {
  GenParams p;
  p.span = {1980, 2020};
  p.field_mix = detail::default_fields();
  p.region_mix = detail::flat_regions();
  p.attachment_offset = 0.7;
  p.attachment_exponent = 1.0;
  p.recency_halflife = 4.0;
  p.self_citation_rate = 0.03;
  p.warmup_years = 10;
  if (name == "stationary") {
    p.articles_per_year = Schedule::constant(2500);
    p.refs_per_article = Schedule::constant(10);
    return p;
  }
  if (name == "declining-uncitedness") {
    // Reference lists grow 250-fold over the span; uncitedness falls every year.
    p.articles_per_year = {10000, 15000, false};
    p.refs_per_article = {0.2, 50, true};
    return p;
  }
  if (name == "region-shift") {
    p.articles_per_year = {4000, 8000, false};
    p.refs_per_article = {2, 20, true};
    p.region_mix = {{"NorthAmerica", {0.55, 0.20}, 0.8},
                    {"Europe", {0.25, 0.35}, 1.2},
                    {"Asia", {0.10, 0.35}, 1.5},
                    {"Africa", Schedule::constant(0.05), 1.0},
                    {"Other", Schedule::constant(0.05), 1.0}};
    return p;
  }
  std::string known;
  for (const auto& n : scenario_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown scenario '" + std::string(name) + "' (presets: " + known + ")");
}

}  // namespace citeconc
