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
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adte/config.hpp"
#include "adte/entropy.hpp"
#include "adte/error.hpp"
#include "adte/record.hpp"
#include "adte/selection.hpp"

namespace adte {

/// Top-K cumulative reliability: sum of the k largest similarity scores.
/// The top k are summed in descending order, so the result does not depend on
/// the input permutation.
inline double tcr_k(std::span<const double> similarities, std::size_t k) {
  detail::require(k >= 1 && k <= similarities.size(), ErrorKind::invalid_input,
                  "tcr_k needs 1 <= k <= L");
  std::vector<double> top(similarities.begin(), similarities.end());
  std::partial_sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), top.end(),
                    std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += top[i];
  return sum;
}

/// Mean Tcr_K over the views a bias-free measure selects, one value per k.
/// Selection uses the raw softmax of each view; Tcr_K uses the raw logits.
inline std::vector<double> mean_tcr_selected(std::span<const InstanceRecord> records,
                                             const EntropyMeasure& measure, double tau,
                                             std::span<const std::size_t> ks) {
  std::vector<double> sums(ks.size(), 0.0);
  std::size_t views = 0;
  std::vector<double> entropies;
  for (const auto& rec : records) {
    entropies.resize(rec.num_views);
    for (std::size_t v = 0; v < rec.num_views; ++v) {
      entropies[v] = entropy_of(measure, softmax(rec.row(v)));
    }
    for (std::size_t v : select_views(entropies, views_to_keep(rec.num_views, tau))) {
      for (std::size_t i = 0; i < ks.size(); ++i) sums[i] += tcr_k(rec.row(v), ks[i]);
      ++views;
    }
  }
  if (views > 0) {
    for (double& s : sums) s /= static_cast<double>(views);
  }
  return sums;
}

inline double mean_tcr_selected(std::span<const InstanceRecord> records,
                                const EntropyMeasure& measure, double tau, std::size_t k) {
  const std::size_t ks[] = {k};
  return mean_tcr_selected(records, measure, tau, ks).front();
}

/// Spearman rank correlation with average ranks for ties. NaN when either
/// side is constant or fewer than two points are given.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), ErrorKind::invalid_input, "spearman needs equal lengths");
  const auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j);
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::size_t n = x.size();
  if (n < 2) return std::nan("");
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

/// Running sums for one class. Instances are keyed by their ground-truth label
/// when present, else by the predicted class.
struct ClassStats {
  std::size_t count = 0;
  std::size_t labeled = 0;
  std::size_t correct = 0;
  double confidence_sum = 0.0;
  double entropy_sum = 0.0;
  double true_prob_sum = 0.0;

  double mean_confidence() const { return count ? confidence_sum / static_cast<double>(count) : 0.0; }
  double mean_entropy() const { return count ? entropy_sum / static_cast<double>(count) : 0.0; }
};

struct BucketStats {
  std::size_t first_rank = 0;
  std::size_t last_rank = 0;  ///< inclusive
  std::size_t classes = 0;
  std::size_t count = 0;
  std::size_t labeled = 0;
  std::size_t correct = 0;
  double mean_confidence = 0.0;
  double mean_entropy = 0.0;
  double mean_true_prob = 0.0;  ///< marginal mass on the ground-truth class

  std::optional<double> accuracy() const {
    if (labeled == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(labeled);
  }
};

struct Report {
  std::size_t instances = 0;
  std::size_t labeled = 0;
  std::size_t correct = 0;
  std::optional<double> accuracy;
  std::vector<ClassStats> per_class;
  std::vector<BucketStats> buckets;
  std::map<std::size_t, double> mean_tcr;
  std::vector<double> final_log_bias;
  AdaptConfig config_echo;
  /// Filled only when requested: per-instance predicted class and label.
  std::vector<std::size_t> predictions;
  std::vector<std::optional<std::size_t>> labels;

  std::size_t num_classes() const noexcept { return per_class.size(); }

  double log_bias_variance() const {
    if (final_log_bias.empty()) return 0.0;
    const double n = static_cast<double>(final_log_bias.size());
    const double mean = std::accumulate(final_log_bias.begin(), final_log_bias.end(), 0.0) / n;
    double var = 0.0;
    for (double b : final_log_bias) var += (b - mean) * (b - mean);
    return var / n;
  }
};

/// Ranks classes by descending prior mass, lowest index first on ties.
inline std::vector<std::size_t> prior_rank_of(std::span<const double> prior) {
  std::vector<std::size_t> order(prior.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return prior[a] > prior[b]; });
  std::vector<std::size_t> rank(prior.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

/// Groups classes into `n_buckets` contiguous prior-rank ranges. `prior_rank[l]`
/// is the rank of class l, 0 being the heaviest head class.
inline std::vector<BucketStats> bucket_report(std::span<const ClassStats> per_class,
                                              std::span<const std::size_t> prior_rank,
                                              std::size_t n_buckets) {
  const std::size_t n = per_class.size();
  detail::require(prior_rank.size() == n, ErrorKind::invalid_input,
                  "prior_rank length differs from class count");
  detail::require(n_buckets >= 1 && n_buckets <= n, ErrorKind::invalid_input,
                  "bucket count must lie in [1, L]");
  std::vector<std::size_t> class_at(n, n);
  for (std::size_t l = 0; l < n; ++l) {
    detail::require(prior_rank[l] < n && class_at[prior_rank[l]] == n, ErrorKind::invalid_input,
                    "prior_rank is not a permutation of [0, L)");
    class_at[prior_rank[l]] = l;
  }
  std::vector<BucketStats> buckets(n_buckets);
  for (std::size_t b = 0; b < n_buckets; ++b) {
    auto& out = buckets[b];
    out.first_rank = b * n / n_buckets;
    out.last_rank = (b + 1) * n / n_buckets - 1;
    double conf = 0.0, ent = 0.0, truth = 0.0;
    for (std::size_t r = out.first_rank; r <= out.last_rank; ++r) {
      const auto& s = per_class[class_at[r]];
      ++out.classes;
      out.count += s.count;
      out.labeled += s.labeled;
      out.correct += s.correct;
      conf += s.confidence_sum;
      ent += s.entropy_sum;
      truth += s.true_prob_sum;
    }
    if (out.count > 0) {
      out.mean_confidence = conf / static_cast<double>(out.count);
      out.mean_entropy = ent / static_cast<double>(out.count);
    }
    if (out.labeled > 0) out.mean_true_prob = truth / static_cast<double>(out.labeled);
  }
  return buckets;
}

/// Accumulates per-instance outcomes into a Report.
class ReportBuilder {
 public:
  ReportBuilder(std::size_t num_classes, std::vector<std::size_t> tcr_ks, bool keep_predictions)
      : tcr_ks_(std::move(tcr_ks)), tcr_sums_(tcr_ks_.size(), 0.0), keep_(keep_predictions) {
    report_.per_class.resize(num_classes);
  }

  /// `selected_rows` are the raw logit rows of the selected views.
  void add(const InstanceRecord& rec, const ProbVector& marginal, std::size_t predicted,
           std::span<const std::size_t> selected) {
    ++report_.instances;
    const std::size_t key = rec.label.value_or(predicted);
    auto& s = report_.per_class.at(key);
    ++s.count;
    s.confidence_sum += marginal.max();
    s.entropy_sum += shannon_entropy(marginal);
    if (rec.label) {
      ++s.labeled;
      ++report_.labeled;
      s.true_prob_sum += marginal[*rec.label];
      if (predicted == *rec.label) {
        ++s.correct;
        ++report_.correct;
      }
    }
    for (std::size_t v : selected) {
      for (std::size_t i = 0; i < tcr_ks_.size(); ++i) {
        if (tcr_ks_[i] <= rec.num_classes) tcr_sums_[i] += tcr_k(rec.row(v), tcr_ks_[i]);
      }
      ++tcr_views_;
    }
    if (keep_) {
      report_.predictions.push_back(predicted);
      report_.labels.push_back(rec.label);
    }
  }

  Report finish(const AdaptConfig& config, std::vector<double> final_log_bias,
                std::span<const std::size_t> prior_rank, std::size_t n_buckets) && {
    report_.config_echo = config;
    report_.final_log_bias = std::move(final_log_bias);
    if (report_.labeled > 0) {
      report_.accuracy =
          static_cast<double>(report_.correct) / static_cast<double>(report_.labeled);
    }
    if (tcr_views_ > 0) {
      for (std::size_t i = 0; i < tcr_ks_.size(); ++i) {
        if (tcr_ks_[i] <= report_.per_class.size()) {
          report_.mean_tcr[tcr_ks_[i]] = tcr_sums_[i] / static_cast<double>(tcr_views_);
        }
      }
    }
    if (report_.instances > 0 && n_buckets > 0) {
      report_.buckets = bucket_report(report_.per_class, prior_rank,
                                      std::min(n_buckets, report_.per_class.size()));
    }
    return std::move(report_);
  }

 private:
  Report report_;
  std::vector<std::size_t> tcr_ks_;
  std::vector<double> tcr_sums_;
  std::size_t tcr_views_ = 0;
  bool keep_;
};

}  // namespace adte
