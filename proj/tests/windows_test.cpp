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

#include <gtest/gtest.h>

#include "support.hpp"

namespace {

using namespace citeconc;
using namespace testing_support;

const YearRange kSpan{1980, 2020};

TEST(Windows, CountedYears) {
  EXPECT_EQ(counted_years(2000, forward_window(2)), (YearRange{2001, 2002}));
  EXPECT_EQ(counted_years(2000, forward_window(10)), (YearRange{2001, 2010}));
  EXPECT_EQ(counted_years(1980, forward_window(1)), (YearRange{1981, 1981}));
  for (int w = 1; w <= 12; ++w) EXPECT_EQ(counted_years(1995, forward_window(w)).size(), w);
}

TEST(Windows, ForwardEligibility) {
  EXPECT_EQ(eligible_pub_years_forward(kSpan, forward_window(2)), (YearRange{1980, 2018}));
  EXPECT_EQ(eligible_pub_years_forward(kSpan, forward_window(10)), (YearRange{1980, 2010}));
  EXPECT_TRUE(eligible_pub_years_forward({2000, 2001}, forward_window(5)).empty());
}

TEST(Windows, WideningSpanNeverShrinksEligibility) {
  for (int w = 1; w <= 10; ++w) {
    for (int end = 1985; end <= 2020; ++end) {
      const auto narrow = eligible_pub_years_forward({1980, end}, forward_window(w));
      const auto wide = eligible_pub_years_forward({1978, end + 1}, forward_window(w));
      EXPECT_GE(wide.size(), narrow.size());
      for (int y = narrow.first; y <= narrow.last; ++y) EXPECT_TRUE(wide.contains(y));
    }
  }
}

TEST(Windows, BackwardPopulation) {
  EXPECT_EQ(cited_population_backward(2000, kSpan, backward_window(10)), (YearRange{1990, 1999}));
  EXPECT_FALSE(cited_population_backward(1985, kSpan, backward_window(10)).has_value());
  EXPECT_EQ(cited_population_backward(1990, kSpan, backward_window(10)), (YearRange{1980, 1989}));
  EXPECT_EQ(analyzable_ref_years_backward(kSpan, backward_window(10)), (YearRange{1990, 2020}));
  for (int y = 1990; y <= 2020; ++y) {
    EXPECT_EQ(cited_population_backward(y, kSpan, backward_window(10)), (YearRange{y - 10, y - 1}));
  }
}

TEST(Windows, DropEarliestPopulation) {
  const auto w = backward_window(10, true);
  EXPECT_FALSE(cited_population_backward(1990, kSpan, w).has_value());
  EXPECT_EQ(cited_population_backward(1991, kSpan, w), (YearRange{1981, 1990}));
  EXPECT_EQ(analyzable_ref_years_backward(kSpan, w), (YearRange{1991, 2020}));
}

TEST(Windows, DirectionIsChecked) {
  EXPECT_THROW(counted_years(2000, backward_window(2)), ConfigError);
  EXPECT_THROW(cited_population_backward(2000, kSpan, forward_window(2)), ConfigError);
  EXPECT_THROW(forward_window(0).validate(), ConfigError);
}

// X (2000) is cited twice in 2000, once in 2001, twice in 2002 (one self) and once in 2003.
Corpus citation_fixture() {
  return build({2000, 2003},
               {{"X", 2000, "F", "R", "J", {"x"}},
                {"s1", 2000},
                {"s2", 2000},
                {"c1", 2001},
                {"c2", 2002},
                {"c3", 2002, "F", "R", "J", {"x"}},
                {"c4", 2003}},
               {{"s1", "X"}, {"s2", "X"}, {"c1", "X"}, {"c2", "X"}, {"c3", "X"}, {"c4", "X"}});
}

TEST(Windows, CitationsInWindow) {
  const auto c = citation_fixture();
  const auto x = idx(c, "X");
  EXPECT_EQ(citations_in_window(c, x, forward_window(2), false), (std::map<int, std::size_t>{{2001, 1}, {2002, 2}}));
  EXPECT_EQ(citations_in_window(c, x, forward_window(2), true), (std::map<int, std::size_t>{{2001, 1}, {2002, 1}}));
  EXPECT_EQ(citations_in_window(c, x, forward_window(3), false),
            (std::map<int, std::size_t>{{2001, 1}, {2002, 2}, {2003, 1}}));
  EXPECT_TRUE(citations_in_window(c, idx(c, "c4"), forward_window(2), false).empty());
}

TEST(Windows, SameYearCitationsAreExcluded) {
  const auto c = build({2000, 2002}, {{"A", 2000}, {"B", 2000}, {"C", 2000}}, {{"B", "A"}, {"C", "A"}});
  EXPECT_TRUE(citations_in_window(c, idx(c, "A"), forward_window(2), false).empty());
}

TEST(Windows, CountProperties) {
  for (std::uint64_t seed : {21u, 22u}) {
    const auto c = small_corpus(seed, 80);
    for (ArticleIndex i = 0; i < c.num_articles(); ++i) {
      std::size_t prev = 0;
      for (int w = 1; w <= 10; ++w) {
        const auto all = windowed_citation_count(c, i, forward_window(w), false);
        const auto noself = windowed_citation_count(c, i, forward_window(w), true);
        ASSERT_LE(noself, all);
        ASSERT_GE(all, prev);
        prev = all;
        std::size_t from_map = 0;
        for (const auto& [y, n] : citations_in_window(c, i, forward_window(w), false)) from_map += n;
        ASSERT_EQ(from_map, all);
      }
    }
  }
}

TEST(Windows, InWindowReferenceCount) {
  const auto c = build({2000, 2003}, {{"A", 2000}, {"B", 2001}, {"C", 2002}, {"D", 2003}},
                       {{"D", "A"}, {"D", "B"}, {"D", "C"}});
  EXPECT_EQ(in_window_reference_count(c, idx(c, "D"), backward_window(2), false), 2u);
  EXPECT_EQ(in_window_reference_count(c, idx(c, "D"), backward_window(3), false), 3u);
  EXPECT_EQ(in_window_reference_count(c, idx(c, "D"), backward_window(1), false), 1u);
}

}  // namespace
