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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "adte/entropy.hpp"
#include "adte/error.hpp"

namespace adte {

/// Per-class FIFO of recent prediction distributions, keyed by pseudo-label.
///
/// Single writer: callers serialize insertions; copies are independent snapshots.
class MemoryBank {
 public:
  MemoryBank(std::size_t num_classes, std::size_t capacity_per_class)
      : capacity_(capacity_per_class), slots_(num_classes) {
    detail::require(num_classes >= 2, ErrorKind::invalid_input, "bank needs at least 2 classes");
    detail::require(capacity_per_class >= 1, ErrorKind::invalid_config,
                    "bank capacity must be positive");
  }

  /// Stores `p` under `pseudo_label`, evicting that class's oldest entry when full.
  void insert(const ProbVector& p, std::size_t pseudo_label) {
    detail::require(p.size() == slots_.size(), ErrorKind::invalid_input,
                    "bank expects " + std::to_string(slots_.size()) + " classes, got " +
                        std::to_string(p.size()));
    detail::require(pseudo_label < slots_.size(), ErrorKind::invalid_input,
                    "pseudo-label out of range");
    auto& slot = slots_[pseudo_label];
    slot.push_back(p);
    if (slot.size() > capacity_) {
      slot.pop_front();
    } else {
      ++total_;
    }
  }

  std::size_t num_classes() const noexcept { return slots_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t total_count() const noexcept { return total_; }
  const std::deque<ProbVector>& slot(std::size_t label) const { return slots_.at(label); }

 private:
  std::size_t capacity_;
  std::vector<std::deque<ProbVector>> slots_;
  std::size_t total_ = 0;
};

/// Appends `p` to the FIFO of its own argmax class (lowest index on ties).
inline void bank_update(MemoryBank& bank, const ProbVector& p) { bank.insert(p, p.argmax()); }

/// What a class with no bank entries contributes to the confusion matrix.
enum class EmptyColumn {
  uniform,  ///< 1/L in every row
  one_hot,  ///< e_l: the class maps to itself
};

/// Column-stochastic matrix a[l][l'] = mean predicted mass on l over entries
/// pseudo-labelled l'. Stored row-major.
struct ConfusionEstimate {
  std::size_t num_classes = 0;
  std::vector<double> a;
  std::vector<std::size_t> counts;

  double operator()(std::size_t row, std::size_t col) const { return a[row * num_classes + col]; }
  double& operator()(std::size_t row, std::size_t col) { return a[row * num_classes + col]; }
};

inline ConfusionEstimate estimate_confusion(const MemoryBank& bank,
                                            EmptyColumn empty = EmptyColumn::uniform) {
  const std::size_t n = bank.num_classes();
  ConfusionEstimate conf{n, std::vector<double>(n * n, 0.0), std::vector<std::size_t>(n, 0)};
  for (std::size_t col = 0; col < n; ++col) {
    const auto& slot = bank.slot(col);
    conf.counts[col] = slot.size();
    if (slot.empty()) {
      if (empty == EmptyColumn::one_hot) {
        conf(col, col) = 1.0;
      } else {
        for (std::size_t row = 0; row < n; ++row) conf(row, col) = 1.0 / static_cast<double>(n);
      }
      continue;
    }
    for (const auto& p : slot) {
      for (std::size_t row = 0; row < n; ++row) conf(row, col) += p[row];
    }
    double total = 0.0;
    for (std::size_t row = 0; row < n; ++row) total += conf(row, col);
    for (std::size_t row = 0; row < n; ++row) conf(row, col) /= total;
  }
  return conf;
}

/// Estimated class prior and its log-bias b = -log(prior).
struct BiasVector {
  ProbVector prior;
  std::vector<double> log_bias;
  std::size_t iterations = 0;
  bool converged = false;

  static BiasVector uniform(std::size_t classes) {
    BiasVector bias{ProbVector::uniform(classes), {}, 0, true};
    bias.log_bias.assign(classes, std::log(static_cast<double>(classes)));
    return bias;
  }

  std::size_t size() const noexcept { return log_bias.size(); }
};

inline constexpr double kPriorFloor = 1e-12;

/// Fixed point of prior = A prior by Jacobi iteration from the uniform vector,
/// with L1 renormalization after every step. Stops after `max_iter` steps or
/// once successive iterates differ by at most `eps` in L1.
inline BiasVector jacobi_prior(const ConfusionEstimate& conf, std::size_t max_iter = 100,
                               double eps = 1e-6) {
  const std::size_t n = conf.num_classes;
  detail::require(n >= 2 && conf.a.size() == n * n, ErrorKind::invalid_input,
                  "confusion matrix shape mismatch");
  detail::require(max_iter >= 1, ErrorKind::invalid_config, "max_iter must be positive");
  detail::require(eps > 0.0, ErrorKind::invalid_config, "eps must be positive");
  for (std::size_t col = 0; col < n; ++col) {
    double total = 0.0;
    for (std::size_t row = 0; row < n; ++row) {
      const double v = conf(row, col);
      detail::require(std::isfinite(v) && v >= 0.0, ErrorKind::invalid_input,
                      "confusion entries must be finite and non-negative");
      total += v;
    }
    detail::require(std::abs(total - 1.0) <= 1e-6, ErrorKind::invalid_input,
                    "confusion column " + std::to_string(col) + " is not stochastic");
  }

  std::vector<double> current(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  BiasVector out;
  for (std::size_t t = 0; t < max_iter; ++t) {
    double mass = 0.0;
    for (std::size_t row = 0; row < n; ++row) {
      double acc = 0.0;
      const double* a_row = conf.a.data() + row * n;
      for (std::size_t col = 0; col < n; ++col) acc += a_row[col] * current[col];
      next[row] = acc;
      mass += acc;
    }
    double delta = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      next[l] /= mass;
      delta += std::abs(next[l] - current[l]);
    }
    current.swap(next);
    out.iterations = t + 1;
    if (delta <= eps) {
      out.converged = true;
      break;
    }
  }

  double mass = 0.0;
  for (double& v : current) {
    v = std::max(v, kPriorFloor);
    mass += v;
  }
  for (double& v : current) v = std::max(v / mass, kPriorFloor);
  out.log_bias.resize(n);
  for (std::size_t l = 0; l < n; ++l) out.log_bias[l] = -std::log(current[l]);
  out.prior = ProbVector(std::move(current));
  return out;
}

/// Min-max maps the log-bias into [alpha, beta]. With invert, the class with the
/// largest bias gets alpha instead of beta. A flat bias gives the midpoint.
inline QProfile q_profile_from_bias(const BiasVector& bias, double alpha, double beta,
                                    bool invert = false) {
  detail::require(alpha > 0.0 && alpha < beta && beta < 1.0, ErrorKind::invalid_config,
                  "q interval must satisfy 0 < alpha < beta < 1");
  const auto& b = bias.log_bias;
  QProfile profile{std::vector<double>(b.size()), alpha, beta};
  const auto [lo, hi] = std::minmax_element(b.begin(), b.end());
  const double b_min = *lo;
  const double span = *hi - b_min;
  for (std::size_t l = 0; l < b.size(); ++l) {
    if (span < 1e-12) {
      profile.q[l] = 0.5 * (alpha + beta);
      continue;
    }
    const double r = (b[l] - b_min) / span;
    profile.q[l] = alpha + (beta - alpha) * (invert ? 1.0 - r : r);
    profile.q[l] = std::clamp(profile.q[l], alpha, beta);
  }
  return profile;
}

/// Divides by the estimated prior and renormalizes (adds b in logit space).
/// A perfectly flat prior returns the input unchanged.
inline ProbVector logit_adjust(const ProbVector& p, const BiasVector& bias) {
  detail::require(p.size() == bias.prior.size(), ErrorKind::invalid_input,
                  "bias and distribution differ in class count");
  const auto prior = bias.prior.values();
  if (std::all_of(prior.begin(), prior.end(), [&](double v) { return v == prior[0]; })) return p;
  std::vector<double> w(p.size());
  for (std::size_t l = 0; l < p.size(); ++l) w[l] = p[l] / prior[l];
  return ProbVector::normalized(std::move(w));
}

}  // namespace adte
