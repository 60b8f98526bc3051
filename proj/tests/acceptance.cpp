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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails.

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>

#include "support.hpp"

namespace {

using namespace citeconc;
using namespace testing_support;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double peak_rss_gib() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return static_cast<double>(u.ru_maxrss) / (1024.0 * 1024.0);  // ru_maxrss is KiB on Linux
}

// 1: fast Gini equals the pairwise definition.
Outcome ac1() {
  Timer t;
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto v = random_vector(rng, 200);
    worst = std::max(worst, std::abs(gini(Distribution(v)) - pairwise_gini(v)));
  }
  const double s = t.seconds();
  return {worst <= 1e-12 && s < 5.0, "1000 vectors, max |diff| " + fmt(worst) + " (tol 1e-12), " + fmt(s, "%.2f") + " s (limit 5 s)"};
}

// 2: analytic anchors.
Outcome ac2() {
  const double a = gini(Distribution({1, 1, 1, 1}));
  const double b = gini(Distribution({0, 0, 0, 1}));
  return {a == 0.0 && b == 0.75, "[1,1,1,1] -> " + fmt(a, "%.17g") + ", [0,0,0,1] -> " + fmt(b, "%.17g")};
}

// 3: per-field mean nics is 1.
Outcome ac3(const std::vector<std::pair<std::string, const Corpus*>>& corpora) {
  double worst = 0.0;
  std::size_t cells = 0;
  std::size_t smallest = SIZE_MAX;
  for (const auto& [name, c] : corpora) {
    smallest = std::min(smallest, c->num_articles());
    for (int W : {2, 5, 10}) {
      for (bool ex : {false, true}) {
        const auto w = forward_window(W);
        NicsOptions opt;
        opt.exclude_self = ex;
        const auto s = nics(*c, eligible_cohort(*c, w), w, opt);
        std::map<LabelId, std::pair<long double, std::size_t>> acc;
        for (std::size_t m = 0; m < s.size(); ++m) {
          auto& [sum, n] = acc[c->field(s.articles[m])];
          sum += s.scores[m];
          ++n;
        }
        for (const auto& [k, v] : acc) {
          if (!(s.baseline.mics.at({k, FieldBaseline::kPooled}) > 0)) continue;
          worst = std::max(worst, std::abs(static_cast<double>(v.first / v.second) - 1.0));
          ++cells;
        }
      }
    }
  }
  return {smallest >= 10000 && worst <= 1e-9,
          std::to_string(cells) + " field cohorts over " + std::to_string(corpora.size()) +
              " corpora (smallest " + std::to_string(smallest) + " articles), max |mean-1| " + fmt(worst) + " (tol 1e-9)"};
}

StudyConfig battery_config(Approach a, int W, bool include_uncited, bool exclude_self) {
  StudyConfig cfg;
  cfg.approach = a;
  cfg.window = a == Approach::citation_based ? forward_window(W) : backward_window(W);
  cfg.include_uncited = include_uncited;
  cfg.exclude_self_citations = exclude_self;
  return cfg;
}

// 4: zero padding strictly raises Gini across the battery.
Outcome ac4(const std::vector<std::pair<std::string, const Corpus*>>& corpora) {
  std::size_t checked = 0, violations = 0;
  for (const auto& [name, c] : corpora) {
    for (auto a : {Approach::citation_based, Approach::reference_based}) {
      for (int W : {2, 5, 10}) {
        for (bool ex : {false, true}) {
          const auto inc = gini_series(*c, battery_config(a, W, true, ex));
          const auto exc = gini_series(*c, battery_config(a, W, false, ex));
          for (std::size_t k = 0; k < inc.rows.size(); ++k) {
            const auto& r = inc.rows[k];
            if (r.zero_count == 0 || !r.values[0] || !exc.rows[k].values[0]) continue;
            ++checked;
            if (!(*r.values[0] > *exc.rows[k].values[0])) ++violations;
          }
        }
      }
    }
  }
  return {checked > 0 && violations == 0,
          std::to_string(checked) + " cohorts with zeros, " + std::to_string(violations) + " violations"};
}

// 5: four-approach divergence on declining-uncitedness.
Outcome ac5(const Corpus& c, double generation_seconds) {
  Timer t;
  std::string detail;
  bool ok = true;
  for (int W : {2, 5, 10}) {
    const double cit = end_to_end_change(gini_series(c, battery_config(Approach::citation_based, W, true, false)));
    const double ref = end_to_end_change(gini_series(c, battery_config(Approach::reference_based, W, false, false)));
    const double cit_exc = end_to_end_change(gini_series(c, battery_config(Approach::citation_based, W, false, false)));
    const double ref_inc = end_to_end_change(gini_series(c, battery_config(Approach::reference_based, W, true, false)));
    ok = ok && cit < 0 && ref > 0;
    detail += "W=" + std::to_string(W) + " cit+uncited " + fmt(cit) + ", ref-uncited " + fmt(ref) + " (cit-uncited " +
              fmt(cit_exc) + ", ref+uncited " + fmt(ref_inc) + "); ";
  }
  const double total = generation_seconds + t.seconds();
  const auto years = c.span().size();
  ok = ok && years >= 30 && c.num_articles() >= 100000 && total < 60.0;
  return {ok, detail + std::to_string(years) + " years, " + std::to_string(c.num_articles()) + " articles, " +
                  fmt(total, "%.1f") + " s (limit 60 s)"};
}

// 6: uncited share strictly decreasing; excluding self-citations never lowers it.
Outcome ac6(const Corpus& c) {
  bool ok = true;
  std::string detail;
  for (int W : {2, 5, 10}) {
    const auto inc = uncited_share_series(c, forward_window(W), false);
    const auto exc = uncited_share_series(c, forward_window(W), true);
    std::size_t rises = 0, order = 0;
    for (std::size_t k = 0; k < inc.rows.size(); ++k) {
      if (*exc.rows[k].values[0] < *inc.rows[k].values[0]) ++order;
      if (k == 0) continue;
      if (!(*inc.rows[k].values[0] < *inc.rows[k - 1].values[0])) ++rises;
      if (!(*exc.rows[k].values[0] < *exc.rows[k - 1].values[0])) ++rises;
    }
    ok = ok && rises == 0 && order == 0;
    detail += "W=" + std::to_string(W) + " " + fmt(*exc.rows.front().values[0], "%.3f") + "->" +
              fmt(*exc.rows.back().values[0], "%.3f") + " (non-decreasing steps " + std::to_string(rises) +
              ", exclude<include years " + std::to_string(order) + "); ";
  }
  return {ok, detail};
}

// 7: removing the rising reference-rich region raises late uncitedness; hand fixture.
Outcome ac7(const Corpus& shift) {
  const auto w = forward_window(5);
  const auto rep = region_removal_uncitedness(shift, "Asia", w, true);
  const int last = eligible_pub_years_forward(shift.span(), w).last;
  double lowest = 1e300;
  for (const auto& row : rep.rows) {
    if (row.year > last - 10 && row.values[2]) lowest = std::min(lowest, *row.values[2]);
  }
  const auto fixture = build({2000, 2003},
                             {{"b1", 2000, "F", "B"}, {"b2", 2000, "F", "B"}, {"b3", 2000, "F", "B"}, {"a1", 2000, "F", "A"},
                              {"a2", 2001, "F", "A"}, {"b4", 2001, "F", "B"}, {"a3", 2002, "F", "A"}, {"b5", 2002, "F", "B"},
                              {"a4", 2003, "F", "A"}},
                             {{"a2", "b1"}, {"a3", "b2"}, {"a2", "a1"}, {"b4", "a1"}, {"b5", "b4"}, {"a4", "b4"}});
  const auto hand = region_removal_uncitedness(fixture, "A", forward_window(2));
  const bool fixture_ok = hand.rows.size() == 2 && hand.rows[0].values[1] == 1.0 && hand.rows[0].values[2] == 3.0 &&
                          hand.rows[1].values[2] == -1.0;
  return {lowest > 0 && lowest < 1e300 && fixture_ok,
          "region-shift minus Asia, W=5, years " + std::to_string(last - 9) + ".." + std::to_string(last) +
              ": min relative change " + fmt(lowest) + "; 2-region fixture " + (fixture_ok ? "exact" : "MISMATCH")};
}

// 8: top share against the sort oracle; pct 1.0 gives exactly 1.
Outcome ac8(const Corpus& c) {
  std::mt19937_64 rng(8);
  double worst = 0.0;
  bool exact_one = true;
  for (int k = 0; k < 1000; ++k) {
    const auto v = random_vector(rng, 200);
    for (double pct : {0.01, 0.05, 0.10}) worst = std::max(worst, std::abs(top_share(Distribution(v), pct) - sorted_top_share(v, pct)));
    exact_one = exact_one && top_share(Distribution(v), 1.0) == 1.0;
  }
  const std::vector<double> pcts{0.01, 0.05, 0.10, 1.0};
  const auto series = top_share_series(c, forward_window(5), pcts);
  std::size_t rows = 0;
  for (const auto& row : series.rows) {
    if (!row.values[3]) continue;
    ++rows;
    exact_one = exact_one && *row.values[3] == 1.0;
  }
  return {worst <= 1e-12 && exact_one,
          "1000 vectors, max |diff| " + fmt(worst) + " (tol 1e-12); pct=1.0 exact on vectors and " +
              std::to_string(rows) + " series rows; published real-data anchors (top 5% 34%->30%, top 10% 50%->44%) need the "
              "proprietary corpus and are not run"};
}

// 9: window eligibility fixtures.
Outcome ac9() {
  const YearRange span{1980, 2020};
  bool ok = eligible_pub_years_forward(span, forward_window(10)) == YearRange{1980, 2010};
  ok = ok && analyzable_ref_years_backward(span, backward_window(10)) == YearRange{1990, 2020};
  for (int y = 1990; y <= 2020; ++y) {
    ok = ok && cited_population_backward(y, span, backward_window(10)) == YearRange{y - 10, y - 1};
  }
  ok = ok && !cited_population_backward(1989, span, backward_window(10));
  ok = ok && eligible_pub_years_forward(span, forward_window(2)) == YearRange{1980, 2018};
  return {ok, "W=10 forward 1980..2010, backward 1990..2020 with [y-10, y-1]; W=2 forward 1980..2018"};
}

// 10: analyze twice gives byte-identical outputs.
Outcome ac10() {
  TempDir root("acceptance-determinism");
  const std::string generated =
      "generator.scenario = region-shift\ngenerator.articles_per_year = 300:500\nspan.start = 1985\nspan.end = 2005\n"
      "seed = 17\noutput.dir = out\n"
      "[study g]\nstudy.kind = gini\nstudy.approach = citation_based, reference_based\nwindow.length = 3\n"
      "[study tails]\nstudy.kind = region_tail\nwindow.length = 3\n"
      "[study rm]\nstudy.kind = region_removal\nregions.remove = Asia\nwindow.length = 3\n";
  cli::GenerateRequest req;
  req.scenario = "stationary";
  req.seed = 3;
  req.span = YearRange{1990, 2004};
  req.overrides = {{"generator.articles_per_year", "400"}};
  req.out_dir = root / "data";
  std::ostringstream sink;
  if (cli::run_generate(req, sink, sink) != 0) return {false, "generate failed"};
  const std::string from_files =
      "input.articles = " + (root / "data" / "articles.tsv").string() + "\ninput.edges = " +
      (root / "data" / "edges.tsv").string() + "\nspan.start = 1990\nspan.end = 2004\noutput.dir = out\n"
      "[study g]\nstudy.kind = gini\nwindow.length = 2, 5\n[study top]\nstudy.kind = top_share\n"
      "[study l]\nstudy.kind = lorenz\n";
  std::size_t compared = 0;
  for (const auto& [tag, text] : {std::pair{"gen", generated}, std::pair{"files", from_files}}) {
    std::vector<fs::path> outs;
    for (int run = 0; run < 2; ++run) {
      const auto dir = root / (std::string(tag) + std::to_string(run));
      fs::create_directories(dir);
      write_file(dir / "run.cfg", text);
      if (cli::run_analyze(dir / "run.cfg", sink, sink) != 0) return {false, std::string(tag) + " analyze failed"};
      outs.push_back(dir / "out");
    }
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(outs[0])) names.push_back(e.path().filename().string());
    std::size_t other = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(outs[1])) ++other;
    if (names.size() != other) return {false, std::string(tag) + ": file sets differ"};
    for (const auto& n : names) {
      if (read_file(outs[0] / n) != read_file(outs[1] / n)) return {false, std::string(tag) + ": " + n + " differs"};
      ++compared;
    }
  }
  return {compared > 0, std::to_string(compared) + " files byte-identical across reruns (generator and file inputs)"};
}

// 11: battery on a 10^6-article / 10^7-edge corpus.
Outcome ac11() {
  Timer t;
  auto p = scenario("stationary");
  p.articles_per_year = Schedule::constant(24400);
  p.refs_per_article = Schedule::constant(14);  // about a quarter of references land in warm-up years
  Outcome out;
  {
    const Corpus c = generate(p);
    const double gen = t.seconds();
    std::size_t series = 0;
    for (auto a : {Approach::citation_based, Approach::reference_based}) {
      for (bool inc : {true, false}) {
        for (int W : {2, 5, 10}) {
          gini_series(c, battery_config(a, W, inc, true));
          ++series;
        }
      }
    }
    const double total = t.seconds();
    const double mem = peak_rss_gib();
    out.pass = c.num_articles() >= 1000000 && c.num_edges() >= 10000000 && total < 120.0 && mem < 8.0;
    out.detail = std::to_string(c.num_articles()) + " articles, " + std::to_string(c.num_edges()) + " edges, " +
                 std::to_string(series) + " series; generation " + fmt(gen, "%.1f") + " s, total " + fmt(total, "%.1f") +
                 " s (limit 120 s); peak RSS " + fmt(mem, "%.2f") + " GiB (limit 8 GiB)";
  }
  return out;
}

}  // namespace

int main() {
  std::map<int, Outcome> results;
  auto guard = [&](int id, const std::function<Outcome()>& fn) {
    try {
      results[id] = fn();
    } catch (const std::exception& e) {
      results[id] = {false, std::string("exception: ") + e.what()};
    }
  };

  guard(11, ac11);
  guard(1, ac1);
  guard(2, ac2);
  guard(9, ac9);
  guard(10, ac10);

  Timer gen;
  const Corpus declining = generate(scenario("declining-uncitedness"));
  const double declining_seconds = gen.seconds();
  const Corpus shift = generate(scenario("region-shift"));
  const Corpus stationary = generate(scenario("stationary"));
  const std::vector<std::pair<std::string, const Corpus*>> corpora{
      {"declining-uncitedness", &declining}, {"region-shift", &shift}, {"stationary", &stationary}};

  guard(3, [&] { return ac3(corpora); });
  guard(4, [&] { return ac4(corpora); });
  guard(5, [&] { return ac5(declining, declining_seconds); });
  guard(6, [&] { return ac6(declining); });
  guard(7, [&] { return ac7(shift); });
  guard(8, [&] { return ac8(declining); });

  int failed = 0;
  for (const auto& [id, r] : results) {
    std::cout << "AC" << id << ' ' << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << '\n';
    failed += !r.pass;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << results.size() - static_cast<std::size_t>(failed) << '/'
            << results.size() << '\n';
  return failed ? 1 : 0;
}
