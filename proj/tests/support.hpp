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

// Shared generators and independent oracles for the test suites. Nothing here
// calls into the code paths it is used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "adte/entropy.hpp"

namespace adte::testing {

/// Uniform draw from the simplex (Dirichlet(1)).
inline std::vector<double> random_simplex(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(n);
  double total = 0.0;
  for (double& x : v) {
    x = expo(rng);
    total += x;
  }
  for (double& x : v) x /= total;
  return v;
}

inline ProbVector random_prob(std::size_t n, std::mt19937_64& rng) {
  return ProbVector::normalized(random_simplex(n, rng));
}

/// Column-stochastic n x n matrix with Dirichlet(1) columns, row-major.
inline std::vector<double> random_column_stochastic(std::size_t n, std::mt19937_64& rng) {
  std::vector<double> a(n * n);
  for (std::size_t col = 0; col < n; ++col) {
    const auto c = random_simplex(n, rng);
    for (std::size_t row = 0; row < n; ++row) a[row * n + col] = c[row];
  }
  return a;
}

/// First k indices of a full stable sort by value, then sorted ascending.
inline std::vector<std::size_t> smallest_k_by_full_sort(const std::vector<double>& v,
                                                        std::size_t k) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline double l1_distance(const std::vector<double>& a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace adte::testing
