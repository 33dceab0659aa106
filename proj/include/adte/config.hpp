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
#include <cstddef>
#include <cstdio>
#include <string>
#include <string_view>

#include "adte/bias.hpp"
#include "adte/error.hpp"

namespace adte {

enum class MeasureKind { shannon, tsallis, adaptive };

/// What the memory bank receives after each prediction.
enum class BankEntry {
  raw_by_prediction,  ///< unadjusted marginal of the selected views, keyed by the predicted class
  adjusted,           ///< the adjusted marginal itself, keyed by its argmax
};

inline std::string_view to_string(MeasureKind m) {
  switch (m) {
    case MeasureKind::shannon: return "shannon";
    case MeasureKind::tsallis: return "tsallis";
    case MeasureKind::adaptive: return "adaptive";
  }
  return "?";
}

inline std::string_view to_string(BankEntry e) {
  return e == BankEntry::adjusted ? "adjusted" : "raw_by_prediction";
}

inline std::string_view to_string(EmptyColumn e) {
  return e == EmptyColumn::one_hot ? "one_hot" : "uniform";
}

inline MeasureKind parse_measure(std::string_view s) {
  if (s == "shannon" || s == "se") return MeasureKind::shannon;
  if (s == "tsallis" || s == "te") return MeasureKind::tsallis;
  if (s == "adaptive" || s == "adte") return MeasureKind::adaptive;
  detail::fail(ErrorKind::invalid_config, "measure: unknown value '" + std::string(s) + "'");
}

inline BankEntry parse_bank_entry(std::string_view s) {
  if (s == "raw_by_prediction") return BankEntry::raw_by_prediction;
  if (s == "adjusted") return BankEntry::adjusted;
  detail::fail(ErrorKind::invalid_config, "bank_entry: unknown value '" + std::string(s) + "'");
}

inline EmptyColumn parse_empty_column(std::string_view s) {
  if (s == "uniform") return EmptyColumn::uniform;
  if (s == "one_hot") return EmptyColumn::one_hot;
  detail::fail(ErrorKind::invalid_config, "empty_column: unknown value '" + std::string(s) + "'");
}

/// Hyperparameters of the online adaptation loop. Defaults: 64 views, keep 10%,
/// 10 bank slots per class, q in [0.01, 0.9], adaptive measure with logit adjustment.
struct AdaptConfig {
  std::size_t n_views = 64;
  double filter_ratio = 0.1;
  std::size_t bank_capacity = 10;
  std::size_t jacobi_max_iter = 100;
  double jacobi_eps = 1e-6;
  double q_alpha = 0.01;
  double q_beta = 0.9;
  MeasureKind measure = MeasureKind::adaptive;
  double tsallis_q = 0.5;
  bool use_logit_adjustment = true;
  bool invert_q_mapping = false;
  std::size_t bias_refresh_period = 1;
  EmptyColumn empty_column = EmptyColumn::uniform;
  BankEntry bank_entry = BankEntry::raw_by_prediction;

  void validate() const {
    using detail::require;
    require(n_views >= 1, ErrorKind::invalid_config, "n_views must be positive");
    require(filter_ratio > 0.0 && filter_ratio <= 1.0, ErrorKind::invalid_config,
            "filter_ratio must lie in (0, 1]");
    require(bank_capacity >= 1, ErrorKind::invalid_config, "bank_capacity must be positive");
    require(jacobi_max_iter >= 1, ErrorKind::invalid_config, "jacobi_max_iter must be positive");
    require(jacobi_eps > 0.0 && std::isfinite(jacobi_eps), ErrorKind::invalid_config,
            "jacobi_eps must be positive");
    require(q_alpha > 0.0, ErrorKind::invalid_config, "q_alpha must be positive");
    require(q_beta < 1.0, ErrorKind::invalid_config, "q_beta must be below 1");
    require(q_alpha < q_beta, ErrorKind::invalid_config, "q_alpha must be below q_beta");
    require(std::isfinite(tsallis_q), ErrorKind::invalid_config, "tsallis_q must be finite");
    require(bias_refresh_period >= 1, ErrorKind::invalid_config,
            "bias_refresh_period must be positive");
  }

  std::string measure_label() const {
    if (measure == MeasureKind::tsallis) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "tsallis(q=%g)", tsallis_q);
      return buf;
    }
    return std::string(to_string(measure));
  }
};

}  // namespace adte
