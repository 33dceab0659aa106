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
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "adte/pipeline.hpp"
#include "adte/synth.hpp"

namespace adte {
namespace {

std::vector<InstanceRecord> small_stream(std::size_t count, std::size_t views, std::uint64_t seed) {
  const auto world = make_world(10, 1.0, 2.0, 3.0, seed);
  StreamSpec spec;
  spec.count = count;
  spec.n_views = views;
  spec.noise_sigma = 1.0;
  spec.corrupt_prob = 0.3;
  return gen_stream(world, spec);
}

TEST(Pipeline, SingleViewPredictsItsArgmax) {
  AdaptConfig config;
  config.use_logit_adjustment = false;
  auto state = AdapterState::fresh(3, config);
  const InstanceRecord rec("a", 1, 3, {0.1, 2.0, -1.0});
  const auto pred = adapt_one(state, rec, config);
  EXPECT_EQ(pred.class_index, 1u);
  EXPECT_EQ(pred.selected_views, (std::vector<std::size_t>{0}));
  EXPECT_EQ(pred.marginal, softmax(rec.row(0)));
  EXPECT_EQ(state.bank.total_count(), 1u);
  EXPECT_EQ(state.bank.slot(1).size(), 1u);
}

TEST(Pipeline, KeepsSixOfSixtyFour) {
  const auto records = small_stream(1, 64, 5);
  AdaptConfig config;
  auto state = AdapterState::fresh(10, config);
  const auto pred = adapt_one(state, records[0], config);
  EXPECT_EQ(pred.selected_views.size(), 6u);
  EXPECT_EQ(pred.per_view_entropy.size(), 64u);
  EXPECT_TRUE(std::is_sorted(pred.selected_views.begin(), pred.selected_views.end()));
}

TEST(Pipeline, ConstantEntropiesKeepLeadingViews) {
  std::vector<double> logits;
  for (int v = 0; v < 20; ++v) logits.insert(logits.end(), {1.0, 0.0, -1.0});
  const InstanceRecord rec("tie", 20, 3, logits);
  AdaptConfig config;
  config.filter_ratio = 0.25;
  auto state = AdapterState::fresh(3, config);
  const auto pred = adapt_one(state, rec, config);
  EXPECT_EQ(pred.selected_views, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(Pipeline, FreshAdaptiveMatchesMidpointTsallis) {
  // Before any bank entry the bias is flat: LA is the identity and every q is
  // the interval midpoint, so the adaptive score is Tsallis plus a constant.
  const auto records = small_stream(20, 32, 9);
  AdaptConfig adaptive;
  AdaptConfig tsallis;
  tsallis.measure = MeasureKind::tsallis;
  tsallis.tsallis_q = 0.5 * (adaptive.q_alpha + adaptive.q_beta);
  tsallis.use_logit_adjustment = false;
  for (const auto& rec : records) {
    auto s1 = AdapterState::fresh(10, adaptive);
    auto s2 = AdapterState::fresh(10, tsallis);
    const auto a = adapt_one(s1, rec, adaptive);
    const auto b = adapt_one(s2, rec, tsallis);
    EXPECT_EQ(a.selected_views, b.selected_views);
    EXPECT_EQ(a.class_index, b.class_index);
    EXPECT_EQ(a.marginal, b.marginal);
  }
}

TEST(Pipeline, Deterministic) {
  const auto records = small_stream(300, 16, 1);
  AdaptConfig config;
  RunOptions options;
  options.keep_predictions = true;
  const auto r1 = run_stream(records, config, options);
  const auto r2 = run_stream(records, config, options);
  EXPECT_EQ(r1.predictions, r2.predictions);
  EXPECT_EQ(r1.final_log_bias, r2.final_log_bias);
  EXPECT_EQ(r1.correct, r2.correct);
}

TEST(Pipeline, FrozenBiasMakesOrderIrrelevant) {
  auto records = small_stream(200, 16, 2);
  AdaptConfig config;
  config.bias_refresh_period = 1000000;
  RunOptions options;
  options.keep_predictions = true;
  const auto forward = run_stream(records, config, options);
  std::vector<InstanceRecord> shuffled = records;
  std::mt19937_64 rng(4);
  std::vector<std::size_t> perm(records.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = records[perm[i]];
  const auto permuted = run_stream(shuffled, config, options);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    EXPECT_EQ(permuted.predictions[i], forward.predictions[perm[i]]);
  }
  EXPECT_EQ(forward.correct, permuted.correct);
}

TEST(Pipeline, BiasRefreshChangesState) {
  const auto records = small_stream(100, 16, 3);
  AdaptConfig config;
  auto state = AdapterState::fresh(10, config);
  for (const auto& rec : records) adapt_one(state, rec, config);
  EXPECT_EQ(state.instances_seen, 100u);
  EXPECT_GT(state.bank.total_count(), 0u);
  refresh_bias(state, config);
  EXPECT_EQ(state.bias.log_bias.size(), 10u);
  // Head classes are over-predicted, so their estimated prior is the largest.
  EXPECT_LT(state.bias.log_bias[0], state.bias.log_bias[9]);
}

TEST(Pipeline, AdjustedBankEntryKeysByMarginalArgmax) {
  AdaptConfig config;
  config.bank_entry = BankEntry::adjusted;
  config.use_logit_adjustment = false;
  auto state = AdapterState::fresh(2, config);
  const InstanceRecord rec("x", 2, 2, {2.0, 0.0, 1.0, 0.0});
  const auto pred = adapt_one(state, rec, config);
  ASSERT_EQ(state.bank.slot(0).size(), 1u);
  EXPECT_EQ(state.bank.slot(0)[0], pred.marginal);
}

TEST(Pipeline, RejectsMismatchedRecords) {
  AdaptConfig config;
  auto state = AdapterState::fresh(3, config);
  const InstanceRecord rec("x", 1, 2, {0.0, 1.0});
  EXPECT_THROW(adapt_one(state, rec, config), Error);

  std::vector<InstanceRecord> mixed = {InstanceRecord("a", 1, 2, {0.0, 1.0}),
                                       InstanceRecord("b", 1, 3, {0.0, 1.0, 2.0})};
  try {
    run_stream(mixed, config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::stream_format);
  }
}

TEST(Pipeline, EmptyStream) {
  AdaptConfig config;
  config.filter_ratio = 0.5;
  const auto report = run_stream(std::span<const InstanceRecord>{}, config);
  EXPECT_EQ(report.instances, 0u);
  EXPECT_FALSE(report.accuracy.has_value());
  EXPECT_EQ(report.config_echo.filter_ratio, 0.5);
}

TEST(Pipeline, UnlabeledStreamHasNoAccuracy) {
  auto records = small_stream(30, 8, 6);
  for (auto& r : records) r.label.reset();
  const auto report = run_stream(records, AdaptConfig{});
  EXPECT_EQ(report.instances, 30u);
  EXPECT_EQ(report.labeled, 0u);
  EXPECT_FALSE(report.accuracy.has_value());
}

TEST(Pipeline, InvalidConfigRejected) {
  AdaptConfig config;
  config.filter_ratio = 0.0;
  EXPECT_THROW(AdapterState::fresh(3, config), Error);
  config = AdaptConfig{};
  config.q_alpha = 0.95;
  EXPECT_THROW(config.validate(), Error);
}

}  // namespace
}  // namespace adte
