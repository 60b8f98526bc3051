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
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "citeconc.hpp"

namespace testing_support {

using citeconc::Corpus;
using citeconc::YearRange;

struct Art {
  std::string id;
  int year;
  std::string field = "F";
  std::string region = "R";
  std::string journal = "J";
  std::vector<std::string> authors = {};
};

using EdgeList = std::vector<std::pair<std::string, std::string>>;

inline Corpus build(YearRange span, const std::vector<Art>& arts, const EdgeList& edges,
                    std::vector<std::string> regions = {}) {
  citeconc::CorpusOptions opt;
  opt.span = span;
  opt.regions = std::move(regions);
  citeconc::CorpusBuilder b(opt);
  for (const auto& a : arts) {
    std::vector<std::string_view> au(a.authors.begin(), a.authors.end());
    b.add_article(a.id, a.year, a.field, a.region, a.journal, au);
  }
  for (const auto& [from, to] : edges) b.add_edge(from, to);
  return std::move(b).build();
}

inline citeconc::ArticleIndex idx(const Corpus& c, std::string_view id) { return c.find(id).value(); }

/// Small flat corpus for property tests: about `per_year` articles each year.
inline citeconc::GenParams small_params(std::uint64_t seed, int per_year = 150, YearRange span = {1990, 2005}) {
  auto p = citeconc::scenario("stationary");
  p.span = span;
  p.articles_per_year = citeconc::Schedule::constant(per_year);
  p.refs_per_article = citeconc::Schedule::constant(6);
  p.warmup_years = 3;
  p.self_citation_rate = 0.1;
  p.seed = seed;
  return p;
}

inline Corpus small_corpus(std::uint64_t seed, int per_year = 150, YearRange span = {1990, 2005}) {
  return citeconc::generate(small_params(seed, per_year, span));
}

/// O(n^2) population Gini: sum_ij |x_i - x_j| / (2 n^2 mean).
inline double pairwise_gini(const std::vector<double>& x) {
  long double diff = 0.0L, total = 0.0L;
  for (double a : x) {
    total += a;
    for (double b : x) diff += std::fabs(static_cast<long double>(a) - b);
  }
  const long double n = static_cast<long double>(x.size());
  return static_cast<double>(diff / (2.0L * n * total));
}

/// Sum of the ceil(pct * n) largest values over the total, by full sort.
inline double sorted_top_share(std::vector<double> x, double pct) {
  std::sort(x.begin(), x.end());
  std::reverse(x.begin(), x.end());
  auto k = static_cast<std::size_t>(std::ceil(pct * static_cast<double>(x.size()) - 1e-9));
  k = std::max<std::size_t>(k, 1);
  long double top = 0.0L, total = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += x[i];
    if (i < k) top += x[i];
  }
  return static_cast<double>(top / total);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t max_n = 200) {
  std::uniform_int_distribution<std::size_t> len(1, max_n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto n = len(rng);
  std::vector<double> v(n);
  const int style = static_cast<int>(rng() % 4);
  for (auto& x : v) {
    switch (style) {
      case 0: x = u(rng) * 100.0; break;
      case 1: x = std::floor(-std::log(1.0 - u(rng)) * 3.0); break;  // integer counts with zeros
      case 2: x = std::pow(u(rng), 6.0) * 1e4; break;                // heavy skew
      default: x = u(rng) < 0.5 ? 0.0 : u(rng); break;
    }
  }
  if (std::all_of(v.begin(), v.end(), [](double y) { return y == 0.0; })) v[0] = 1.0;
  return v;
}

class TempDir {
 public:
  explicit TempDir(std::string_view name) {
    path_ = std::filesystem::temp_directory_path() /
            ("citeconc-" + std::string(name) + "-" + std::to_string(std::random_device{}()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace testing_support
