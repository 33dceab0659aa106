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

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "adte/pipeline.hpp"
#include "adte/synth.hpp"

namespace adte {
namespace {

TEST(Tcr, Example) {
  const std::vector<double> s = {0.1, 3.0, -1.0, 2.0};
  EXPECT_DOUBLE_EQ(tcr_k(s, 1), 3.0);
  EXPECT_DOUBLE_EQ(tcr_k(s, 2), 5.0);
  EXPECT_DOUBLE_EQ(tcr_k(s, 4), 4.1);
  EXPECT_THROW(tcr_k(s, 0), Error);
  EXPECT_THROW(tcr_k(s, 5), Error);
}

TEST(Tcr, PermutationInvariantAndMonotone) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> s(30);
    for (double& v : s) v = g(rng);
    std::vector<double> shuffled = s;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<double> sorted = s;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double prefix = 0.0;
    for (std::size_t k = 1; k <= 30; ++k) {
      prefix += sorted[k - 1];
      EXPECT_EQ(tcr_k(s, k), tcr_k(shuffled, k));
      EXPECT_NEAR(tcr_k(s, k), prefix, 1e-12);
      if (k > 1) EXPECT_GE(tcr_k(s, k - 1) / static_cast<double>(k - 1),
                           tcr_k(s, k) / static_cast<double>(k) - 1e-12);
    }
  }
}

TEST(Spearman, Basics) {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> up = {10, 20, 30, 40};
  const std::vector<double> down = {4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(spearman(x, up), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, down), -1.0);
  const std::vector<double> ties = {1, 1, 2, 2};
  EXPECT_NEAR(spearman(x, ties), 2.0 / std::sqrt(5.0), 1e-12);
  const std::vector<double> flat = {3, 3, 3, 3};
  EXPECT_TRUE(std::isnan(spearman(x, flat)));
}

TEST(PriorRank, OrdersHeadFirst) {
  const std::vector<double> prior = {0.1, 0.5, 0.1, 0.3};
  EXPECT_EQ(prior_rank_of(prior), (std::vector<std::size_t>{2, 0, 3, 1}));
}

TEST(Buckets, ContiguousRanges) {
  std::vector<ClassStats> stats(5);
  for (std::size_t l = 0; l < 5; ++l) {
    stats[l].count = l + 1;
    stats[l].labeled = l + 1;
    stats[l].correct = l;
    stats[l].confidence_sum = 0.5 * static_cast<double>(l + 1);
  }
  const std::vector<std::size_t> rank = {0, 1, 2, 3, 4};
  const auto b = bucket_report(stats, rank, 2);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].first_rank, 0u);
  EXPECT_EQ(b[0].last_rank, 1u);
  EXPECT_EQ(b[1].first_rank, 2u);
  EXPECT_EQ(b[1].last_rank, 4u);
  EXPECT_EQ(b[0].count, 3u);
  EXPECT_EQ(b[1].count, 12u);
  EXPECT_EQ(b[1].correct, 9u);
  EXPECT_DOUBLE_EQ(*b[1].accuracy(), 0.75);
  EXPECT_DOUBLE_EQ(b[0].mean_confidence, 0.5);
  const std::vector<std::size_t> bad = {0, 0, 1, 2, 3};
  EXPECT_THROW(bucket_report(stats, bad, 2), Error);
  EXPECT_THROW(bucket_report(stats, rank, 6), Error);
}

TEST(Report, RecountsMatchBruteForce) {
  const auto world = make_world(12, 1.0, 2.0, 2.5, 8);
  StreamSpec spec;
  spec.count = 400;
  spec.n_views = 16;
  spec.noise_sigma = 1.0;
  spec.corrupt_prob = 0.3;
  auto records = gen_stream(world, spec);
  for (std::size_t i = 0; i < records.size(); i += 7) records[i].label.reset();
  RunOptions options;
  options.keep_predictions = true;
  options.n_buckets = 3;
  const auto report = run_stream(records, AdaptConfig{}, options);

  std::size_t labeled = 0, correct = 0;
  std::vector<std::size_t> count(12, 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto key = records[i].label.value_or(report.predictions[i]);
    ++count[key];
    if (records[i].label) {
      ++labeled;
      if (*records[i].label == report.predictions[i]) ++correct;
    }
  }
  EXPECT_EQ(report.labeled, labeled);
  EXPECT_EQ(report.correct, correct);
  ASSERT_TRUE(report.accuracy.has_value());
  EXPECT_DOUBLE_EQ(*report.accuracy, static_cast<double>(correct) / static_cast<double>(labeled));
  std::size_t sum = 0, bucket_sum = 0;
  for (std::size_t l = 0; l < 12; ++l) {
    EXPECT_EQ(report.per_class[l].count, count[l]);
    sum += report.per_class[l].count;
  }
  for (const auto& b : report.buckets) bucket_sum += b.count;
  EXPECT_EQ(sum, 400u);
  EXPECT_EQ(bucket_sum, 400u);
  EXPECT_EQ(report.mean_tcr.size(), 4u);  // K = 20 exceeds L
  EXPECT_EQ(report.final_log_bias.size(), 12u);
}

TEST(Report, MeanTcrSelectedUsesRawRows) {
  const InstanceRecord rec("r", 2, 3, {5.0, 0.0, 0.0, 1.0, 1.0, 1.0});
  const std::vector<InstanceRecord> records = {rec};
  EXPECT_DOUBLE_EQ(mean_tcr_selected(records, Shannon{}, 0.5, 1), 5.0);
  EXPECT_DOUBLE_EQ(mean_tcr_selected(records, Shannon{}, 1.0, 2), 3.5);
}

TEST(Report, LogBiasVariance) {
  Report r;
  r.final_log_bias = {1.0, 2.0, 3.0};
  EXPECT_NEAR(r.log_bias_variance(), 2.0 / 3.0, 1e-15);
}

}  // namespace
}  // namespace adte
