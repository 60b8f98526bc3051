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
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "citeconc/error.hpp"

namespace citeconc {

/// Multiset of non-negative scores with an explicit count of exact zeros.
class Distribution {
 public:
  Distribution() = default;

  explicit Distribution(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DomainError("distribution values must be finite and non-negative");
      }
      if (v == 0.0) ++zeros_;
    }
  }

  template <class T>
  static Distribution from(std::span<const T> values) {
    return Distribution(std::vector<double>(values.begin(), values.end()));
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::size_t zero_count() const noexcept { return zeros_; }

  Distribution without_zeros() const {
    std::vector<double> v;
    v.reserve(values_.size() - zeros_);
    std::copy_if(values_.begin(), values_.end(), std::back_inserter(v), [](double x) { return x > 0.0; });
    return Distribution(std::move(v));
  }

 private:
  std::vector<double> values_;
  std::size_t zeros_ = 0;
};

namespace detail {

inline void require_positive_mass(const Distribution& d) {
  if (d.empty()) throw DomainError("empty distribution");
  if (d.zero_count() == d.size()) throw DomainError("undefined Gini (zero mean)");
}

inline std::vector<double> sorted_ascending(const Distribution& d) {
  std::vector<double> v(d.values().begin(), d.values().end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

/// Population Gini coefficient, sum_ij |x_i - x_j| / (2 n^2 mean), via the sorted form
/// sum_i (2i - n - 1) x_(i) / (n sum x).
inline double gini(const Distribution& d) {
  detail::require_positive_mass(d);
  const auto v = detail::sorted_ascending(d);
  const auto n = static_cast<long double>(v.size());
  long double weighted = 0.0L;
  long double total = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long double rank = static_cast<long double>(i + 1);
    weighted += (2.0L * rank - n - 1.0L) * v[i];
    total += v[i];
  }
  const long double g = weighted / (n * total);
  return static_cast<double>(std::max(g, 0.0L));
}

struct LorenzPoint {
  double p;  // cumulative population share
  double L;  // cumulative value share
};

struct LorenzCurve {
  std::vector<LorenzPoint> points;
};

/// Lorenz curve of the ascending-sorted values, sampled at `points` evenly spaced
/// population shares (plus both endpoints) by linear interpolation between ranks.
inline LorenzCurve lorenz(const Distribution& d, int points) {
  detail::require_positive_mass(d);
  if (points < 1) throw DomainError("lorenz needs at least one sample interval");
  const auto v = detail::sorted_ascending(d);
  const std::size_t n = v.size();
  std::vector<long double> cum(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + v[i];
  const long double total = cum[n];

  LorenzCurve curve;
  curve.points.reserve(static_cast<std::size_t>(points) + 1);
  for (int j = 0; j <= points; ++j) {
    if (j == 0) {
      curve.points.push_back({0.0, 0.0});
      continue;
    }
    if (j == points) {
      curve.points.push_back({1.0, 1.0});
      continue;
    }
    const long double p = static_cast<long double>(j) / points;
    const long double pos = p * static_cast<long double>(n);
    auto k = static_cast<std::size_t>(std::floor(pos));
    k = std::min(k, n - 1);
    const long double frac = pos - static_cast<long double>(k);
    const long double L = (cum[k] + frac * v[k]) / total;
    curve.points.push_back({static_cast<double>(p), static_cast<double>(std::min(L, p))});
  }
  return curve;
}

/// ceil(pct * n), treating products within 1e-9 of an integer as that integer; at
/// least 1 for non-empty populations.
inline std::size_t top_count(std::size_t n, double pct) {
  if (!(pct > 0.0 && pct <= 1.0)) throw DomainError("top share percentage must lie in (0, 1]");
  const double x = pct * static_cast<double>(n);
  const double r = std::round(x);
  const double k = std::abs(x - r) < 1e-9 ? r : std::ceil(x);
  return std::clamp<std::size_t>(static_cast<std::size_t>(k), n ? 1 : 0, n);
}

/// Share of the total held by the ceil(pct * n) largest values.
inline double top_share(const Distribution& d, double pct) {
  detail::require_positive_mass(d);
  const auto k = top_count(d.size(), pct);
  std::vector<double> v(d.values().begin(), d.values().end());
  std::sort(v.begin(), v.end(), std::greater<>());
  long double top = 0.0L;
  long double total = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) {
    total += v[i];
    if (i + 1 == k) top = total;
  }
  return static_cast<double>(top / total);
}

/// Indices of the ceil(pct * n) highest scores. Ties are broken by `before(a, b)`,
/// which must be a strict total order over indices.
template <class Before>
std::vector<std::size_t> top_members(std::span<const double> scores, double pct, Before before) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto k = top_count(scores.size(), pct);
  auto cmp = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return before(a, b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), cmp);
  order.resize(k);
  return order;
}

}  // namespace citeconc
