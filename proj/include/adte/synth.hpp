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

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "adte/entropy.hpp"
#include "adte/error.hpp"
#include "adte/record.hpp"

namespace adte {

/// A synthetic classifier with a Zipf class prior and a head-favouring logit
/// offset delta_l = kappa * (log pi_l - mean log pi).
struct SynthWorld {
  std::size_t num_classes = 0;
  ProbVector class_prior;
  std::vector<double> bias_offset;
  double zipf_s = 0.0;
  double bias_strength = 0.0;
  double signal_margin = 1.0;
  std::uint64_t seed = 0;

  friend bool operator==(const SynthWorld&, const SynthWorld&) = default;
};

enum class LabelDist { uniform, prior };

struct StreamSpec {
  std::size_t count = 1;
  std::size_t n_views = 1;
  double noise_sigma = 0.0;
  double corrupt_prob = 0.0;
  LabelDist label_dist = LabelDist::uniform;

  void validate() const {
    detail::require(count >= 1, ErrorKind::invalid_config, "count must be positive");
    detail::require(n_views >= 1, ErrorKind::invalid_config, "n_views must be positive");
    detail::require(std::isfinite(noise_sigma) && noise_sigma >= 0.0, ErrorKind::invalid_config,
                    "noise_sigma must be non-negative");
    detail::require(corrupt_prob >= 0.0 && corrupt_prob <= 1.0, ErrorKind::invalid_config,
                    "corrupt_prob must lie in [0, 1]");
  }
};

/// Margin multiplier applied to a corrupted view's true-class logit.
inline constexpr double kCorruptAttenuation = 0.2;

inline SynthWorld make_world(std::size_t num_classes, double zipf_s, double bias_strength,
                             double margin, std::uint64_t seed) {
  detail::require(num_classes >= 2, ErrorKind::invalid_config, "need at least 2 classes");
  detail::require(std::isfinite(zipf_s) && zipf_s >= 0.0, ErrorKind::invalid_config,
                  "zipf exponent must be non-negative");
  detail::require(std::isfinite(bias_strength) && bias_strength >= 0.0,
                  ErrorKind::invalid_config, "bias strength must be non-negative");
  detail::require(std::isfinite(margin) && margin > 0.0, ErrorKind::invalid_config,
                  "margin must be positive");
  std::vector<double> weights(num_classes);
  for (std::size_t l = 0; l < num_classes; ++l) {
    weights[l] = std::pow(static_cast<double>(l + 1), -zipf_s);
  }
  SynthWorld world;
  world.num_classes = num_classes;
  world.class_prior = ProbVector::normalized(std::move(weights));
  world.zipf_s = zipf_s;
  world.bias_strength = bias_strength;
  world.signal_margin = margin;
  world.seed = seed;
  world.bias_offset.assign(num_classes, 0.0);
  if (bias_strength > 0.0) {
    std::vector<double> logs(num_classes);
    for (std::size_t l = 0; l < num_classes; ++l) logs[l] = std::log(world.class_prior[l]);
    const double mean =
        std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(num_classes);
    for (std::size_t l = 0; l < num_classes; ++l) {
      world.bias_offset[l] = bias_strength * (logs[l] - mean);
    }
  }
  return world;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Instance `index` of the stream. Its randomness depends only on (seed, index).
inline InstanceRecord gen_instance(const SynthWorld& world, const StreamSpec& spec,
                                   std::size_t index) {
  std::mt19937_64 rng(detail::splitmix64(world.seed ^ detail::splitmix64(index)));
  const std::size_t n = world.num_classes;

  std::size_t label = 0;
  if (spec.label_dist == LabelDist::uniform) {
    label = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  } else {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    label = n - 1;
    for (std::size_t l = 0; l < n; ++l) {
      if (u < world.class_prior[l]) {
        label = l;
        break;
      }
      u -= world.class_prior[l];
    }
  }

  std::bernoulli_distribution corrupt(spec.corrupt_prob);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> logits(spec.n_views * n);
  for (std::size_t v = 0; v < spec.n_views; ++v) {
    const double signal =
        world.signal_margin * (corrupt(rng) ? kCorruptAttenuation : 1.0);
    double* row = logits.data() + v * n;
    for (std::size_t l = 0; l < n; ++l) {
      row[l] = world.bias_offset[l] + spec.noise_sigma * noise(rng);
    }
    row[label] += signal;
  }
  char id[32];
  std::snprintf(id, sizeof id, "synth-%06zu", index);
  return InstanceRecord(id, spec.n_views, n, std::move(logits), label);
}

inline std::vector<InstanceRecord> gen_stream(const SynthWorld& world, const StreamSpec& spec) {
  spec.validate();
  std::vector<InstanceRecord> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(gen_instance(world, spec, i));
  return out;
}

}  // namespace adte
