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
#include <vector>

#include "adte/synth.hpp"

namespace adte {
namespace {

TEST(Synth, ZipfPrior) {
  const auto world = make_world(3, 1.0, 0.0, 1.0, 0);
  EXPECT_NEAR(world.class_prior[0], 6.0 / 11.0, 1e-15);
  EXPECT_NEAR(world.class_prior[1], 3.0 / 11.0, 1e-15);
  EXPECT_NEAR(world.class_prior[2], 2.0 / 11.0, 1e-15);
  for (double d : world.bias_offset) EXPECT_EQ(d, 0.0);

  const auto flat = make_world(4, 0.0, 2.0, 1.0, 0);
  for (std::size_t l = 0; l < 4; ++l) {
    EXPECT_DOUBLE_EQ(flat.class_prior[l], 0.25);
    EXPECT_NEAR(flat.bias_offset[l], 0.0, 1e-15);
  }
}

TEST(Synth, OffsetIsCenteredLogPrior) {
  const auto world = make_world(50, 1.2, 1.5, 2.0, 1);
  double sum = 0.0;
  for (std::size_t l = 0; l < 50; ++l) {
    sum += world.bias_offset[l];
    if (l > 0) EXPECT_LT(world.bias_offset[l], world.bias_offset[l - 1]);
  }
  EXPECT_NEAR(sum, 0.0, 1e-10);
  EXPECT_NEAR(world.bias_offset[0] - world.bias_offset[1],
              1.5 * std::log(world.class_prior[0] / world.class_prior[1]), 1e-12);
}

TEST(Synth, DeterministicPerIndex) {
  const auto world = make_world(10, 1.0, 2.0, 3.0, 77);
  StreamSpec spec;
  spec.count = 50;
  spec.n_views = 4;
  spec.noise_sigma = 1.0;
  spec.corrupt_prob = 0.3;
  const auto a = gen_stream(world, spec);
  const auto b = gen_stream(world, spec);
  EXPECT_EQ(a, b);
  EXPECT_EQ(gen_instance(world, spec, 17), a[17]);
  EXPECT_EQ(a[3].id, "synth-000003");
  const auto other = gen_stream(make_world(10, 1.0, 2.0, 3.0, 78), spec);
  EXPECT_NE(a, other);
}

TEST(Synth, PriorLabelsConverge) {
  const auto world = make_world(8, 1.0, 0.0, 1.0, 5);
  StreamSpec spec;
  spec.count = 10000;
  spec.label_dist = LabelDist::prior;
  const auto records = gen_stream(world, spec);
  std::vector<double> freq(8, 0.0);
  for (const auto& r : records) freq[*r.label] += 1.0 / 10000.0;
  double l1 = 0.0;
  for (std::size_t l = 0; l < 8; ++l) l1 += std::abs(freq[l] - world.class_prior[l]);
  EXPECT_LE(l1, 0.05);
}

TEST(Synth, HeadClassesWinWithoutSignal) {
  // With uniform labels, the offset makes head classes the most frequent argmax.
  const auto world = make_world(20, 1.0, 2.0, 0.5, 3);
  StreamSpec spec;
  spec.count = 4000;
  spec.noise_sigma = 1.0;
  const auto records = gen_stream(world, spec);
  std::vector<std::size_t> predicted(20, 0);
  for (const auto& r : records) ++predicted[softmax(r.row(0)).argmax()];
  std::size_t head = 0, tail = 0;
  for (std::size_t l = 0; l < 5; ++l) head += predicted[l];
  for (std::size_t l = 15; l < 20; ++l) tail += predicted[l];
  EXPECT_GT(head, 10 * tail);
}

TEST(Synth, NoiselessIsAlwaysCorrect) {
  const auto world = make_world(10, 1.0, 0.0, 1.0, 9);
  StreamSpec spec;
  spec.count = 200;
  spec.n_views = 3;
  const auto records = gen_stream(world, spec);
  for (const auto& r : records) {
    for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(softmax(r.row(v)).argmax(), *r.label);
  }
}

TEST(Synth, RejectsBadParameters) {
  EXPECT_THROW(make_world(1, 1.0, 1.0, 1.0, 0), Error);
  EXPECT_THROW(make_world(3, -1.0, 1.0, 1.0, 0), Error);
  EXPECT_THROW(make_world(3, 1.0, -1.0, 1.0, 0), Error);
  EXPECT_THROW(make_world(3, 1.0, 1.0, 0.0, 0), Error);
  const auto world = make_world(3, 1.0, 1.0, 1.0, 0);
  StreamSpec spec;
  spec.corrupt_prob = 1.5;
  EXPECT_THROW(gen_stream(world, spec), Error);
  spec = StreamSpec{};
  spec.count = 0;
  EXPECT_THROW(gen_stream(world, spec), Error);
}

}  // namespace
}  // namespace adte
