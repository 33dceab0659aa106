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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "adte/bias.hpp"
#include "adte/config.hpp"
#include "adte/entropy.hpp"
#include "adte/error.hpp"
#include "adte/metrics.hpp"
#include "adte/record.hpp"
#include "adte/selection.hpp"

namespace adte {

struct Prediction {
  std::size_t class_index = 0;
  ProbVector marginal;
  std::vector<std::size_t> selected_views;
  std::vector<double> per_view_entropy;
};

/// Mutable state carried across a stream. One writer per instance.
struct AdapterState {
  MemoryBank bank;
  BiasVector bias;
  QProfile profile;
  std::size_t instances_seen = 0;

  static AdapterState fresh(std::size_t num_classes, const AdaptConfig& config) {
    config.validate();
    AdapterState state{MemoryBank(num_classes, config.bank_capacity),
                       BiasVector::uniform(num_classes), {}, 0};
    state.profile = q_profile_from_bias(state.bias, config.q_alpha, config.q_beta,
                                        config.invert_q_mapping);
    return state;
  }

  std::size_t num_classes() const noexcept { return bank.num_classes(); }
};

/// Re-estimates bias and q-profile from the bank. An empty bank keeps the
/// current (initially uniform) estimate.
inline void refresh_bias(AdapterState& state, const AdaptConfig& config) {
  if (state.bank.total_count() == 0) return;
  state.bias = jacobi_prior(estimate_confusion(state.bank, config.empty_column),
                            config.jacobi_max_iter, config.jacobi_eps);
  state.profile =
      q_profile_from_bias(state.bias, config.q_alpha, config.q_beta, config.invert_q_mapping);
}

/// One step of online adaptation: score every view, keep the most confident,
/// average them, predict, then feed the bank.
inline Prediction adapt_one(AdapterState& state, const InstanceRecord& record,
                            const AdaptConfig& config) {
  record.validate();
  detail::require(record.num_classes == state.num_classes(), ErrorKind::invalid_input,
                  "record '" + record.id + "' has " + std::to_string(record.num_classes) +
                      " classes, state expects " + std::to_string(state.num_classes()));

  if (state.instances_seen % config.bias_refresh_period == 0) refresh_bias(state, config);

  const std::size_t n = record.num_views;
  std::vector<ProbVector> raw;
  std::vector<ProbVector> scored;
  raw.reserve(n);
  scored.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    raw.push_back(softmax(record.row(v)));
    scored.push_back(config.use_logit_adjustment ? logit_adjust(raw.back(), state.bias)
                                                 : raw.back());
  }

  EntropyMeasure measure = Shannon{};
  if (config.measure == MeasureKind::tsallis) measure = Tsallis{config.tsallis_q};
  if (config.measure == MeasureKind::adaptive) measure = AdaptiveTsallis{state.profile.q};

  Prediction out;
  out.per_view_entropy.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.per_view_entropy[v] = entropy_of(measure, scored[v]);
  out.selected_views = select_views(out.per_view_entropy, views_to_keep(n, config.filter_ratio));

  std::vector<ProbVector> picked;
  picked.reserve(out.selected_views.size());
  for (std::size_t v : out.selected_views) picked.push_back(scored[v]);
  out.marginal = aggregate(picked);
  out.class_index = out.marginal.argmax();

  if (config.bank_entry == BankEntry::adjusted) {
    bank_update(state.bank, out.marginal);
  } else {
    picked.clear();
    for (std::size_t v : out.selected_views) picked.push_back(raw[v]);
    state.bank.insert(aggregate(picked), out.class_index);
  }
  ++state.instances_seen;
  return out;
}

struct RunOptions {
  std::vector<std::size_t> tcr_ks{1, 3, 5, 10, 20};
  std::size_t n_buckets = 2;
  /// Class ranks by true prior (0 = head). Empty: rank by the final estimated prior.
  std::vector<std::size_t> prior_rank;
  bool keep_predictions = false;
};

/// Runs the stream strictly in order. `next` yields records until it returns
/// std::nullopt; every record must share the first record's class count.
template <typename Source>
  requires std::is_invocable_r_v<std::optional<InstanceRecord>, Source&>
Report run_stream(Source&& next, const AdaptConfig& config, const RunOptions& options = {}) {
  config.validate();
  std::optional<AdapterState> state;
  std::optional<ReportBuilder> builder;
  std::size_t index = 0;
  while (std::optional<InstanceRecord> rec = next()) {
    if (!state) {
      state = AdapterState::fresh(rec->num_classes, config);
      builder.emplace(rec->num_classes, options.tcr_ks, options.keep_predictions);
    } else if (rec->num_classes != state->num_classes()) {
      detail::fail(ErrorKind::stream_format,
                   "record " + std::to_string(index) + " has " +
                       std::to_string(rec->num_classes) + " classes, stream has " +
                       std::to_string(state->num_classes()));
    }
    const Prediction pred = adapt_one(*state, *rec, config);
    builder->add(*rec, pred.marginal, pred.class_index, pred.selected_views);
    ++index;
  }
  if (!state) {
    Report empty;
    empty.config_echo = config;
    return empty;
  }
  refresh_bias(*state, config);
  std::vector<std::size_t> rank = options.prior_rank;
  if (rank.empty()) rank = prior_rank_of(state->bias.prior.values());
  return std::move(*builder).finish(config, state->bias.log_bias, rank, options.n_buckets);
}

inline Report run_stream(std::span<const InstanceRecord> records, const AdaptConfig& config,
                         const RunOptions& options = {}) {
  std::size_t i = 0;
  return run_stream(
      [&]() -> std::optional<InstanceRecord> {
        if (i == records.size()) return std::nullopt;
        return records[i++];
      },
      config, options);
}

}  // namespace adte
