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
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "adte/entropy.hpp"
#include "adte/error.hpp"

namespace adte {

/// N_v = max(1, floor(tau * N)). The product is nudged by 1e-9 so ratios such
/// as 0.29 * 100 are not floored one below the intended count.
inline std::size_t views_to_keep(std::size_t n_views, double filter_ratio) {
  const auto kept = static_cast<std::size_t>(
      std::floor(filter_ratio * static_cast<double>(n_views) + 1e-9));
  return std::clamp<std::size_t>(kept, 1, std::max<std::size_t>(n_views, 1));
}

/// Indices of the `n_select` smallest entropies, lower index first on ties,
/// returned in ascending index order.
inline std::vector<std::size_t> select_views(std::span<const double> entropies,
                                             std::size_t n_select) {
  detail::require(n_select <= entropies.size(), ErrorKind::invalid_input,
                  "cannot select " + std::to_string(n_select) + " of " +
                      std::to_string(entropies.size()) + " views");
  for (double h : entropies) {
    detail::require(!std::isnan(h), ErrorKind::invalid_input, "entropy is NaN");
  }
  std::vector<std::size_t> order(entropies.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto by_entropy = [&](std::size_t a, std::size_t b) {
    return entropies[a] < entropies[b] || (entropies[a] == entropies[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_select),
                    order.end(), by_entropy);
  order.resize(n_select);
  std::sort(order.begin(), order.end());
  return order;
}

/// Elementwise mean of equally sized distributions, renormalized.
inline ProbVector aggregate(std::span<const ProbVector> probs) {
  detail::require(!probs.empty(), ErrorKind::invalid_input, "nothing to aggregate");
  const std::size_t n = probs.front().size();
  std::vector<double> mean(n, 0.0);
  for (const auto& p : probs) {
    detail::require(p.size() == n, ErrorKind::invalid_input,
                    "aggregated distributions differ in length");
    for (std::size_t l = 0; l < n; ++l) mean[l] += p[l];
  }
  for (double& v : mean) v /= static_cast<double>(probs.size());
  return ProbVector::normalized(std::move(mean));
}

}  // namespace adte
