/*
 * Copyright 2026 The ADTE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "adte/selection.hpp"
#include "support.hpp"

namespace adte {
namespace {

TEST(ViewsToKeep, Counts) {
  EXPECT_EQ(views_to_keep(64, 0.1), 6u);
  EXPECT_EQ(views_to_keep(1, 0.1), 1u);
  EXPECT_EQ(views_to_keep(10, 1.0), 10u);
  EXPECT_EQ(views_to_keep(100, 0.29), 29u);
  EXPECT_EQ(views_to_keep(5, 0.01), 1u);
}

TEST(SelectViews, Example) {
  const std::vector<double> h = {0.5, 0.1, 0.3, 0.1, 0.9};
  EXPECT_EQ(select_views(h, 2), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(select_views(h, 3), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(select_views(h, 0), (std::vector<std::size_t>{}));
}

TEST(SelectViews, TiesPreferLowerIndex) {
  const std::vector<double> h(8, 1.0);
  EXPECT_EQ(select_views(h, 3), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(SelectViews, MatchesFullSortOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coarse(0, 5);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 70);
    std::vector<double> h(n);
    for (double& v : h) v = coarse(rng) * 0.25;  // plenty of ties
    const std::size_t k = views_to_keep(n, 0.1 + 0.01 * (trial % 50));
    EXPECT_EQ(select_views(h, k), testing::smallest_k_by_full_sort(h, k));
  }
}

TEST(SelectViews, RejectsBadInput) {
  const std::vector<double> h = {0.1, 0.2};
  EXPECT_THROW(select_views(h, 3), Error);
  const std::vector<double> nan = {0.1, std::nan("")};
  EXPECT_THROW(select_views(nan, 1), Error);
}

TEST(Aggregate, MeanThenNormalize) {
  const std::vector<ProbVector> ps = {ProbVector({1.0, 0.0}), ProbVector({0.5, 0.5})};
  const auto m = aggregate(ps);
  EXPECT_DOUBLE_EQ(m[0], 0.75);
  EXPECT_DOUBLE_EQ(m[1], 0.25);
  EXPECT_THROW(aggregate(std::span<const ProbVector>{}), Error);
  const std::vector<ProbVector> mixed = {ProbVector({1.0, 0.0}), ProbVector({0.2, 0.3, 0.5})};
  EXPECT_THROW(aggregate(mixed), Error);
}

TEST(Aggregate, SingleViewIsIdentity) {
  std::mt19937_64 rng(3);
  const auto p = testing::random_prob(12, rng);
  const std::vector<ProbVector> one = {p};
  const auto m = aggregate(one);
  for (std::size_t l = 0; l < 12; ++l) EXPECT_NEAR(m[l], p[l], 1e-15);
}

}  // namespace
}  // namespace adte
