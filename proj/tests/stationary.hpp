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

// Dense linear-algebra oracle for the Jacobi prior estimate.

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace adte::testing {

/// Stationary vector of a column-stochastic matrix by a direct linear solve of
/// (A - I) p = 0 with one equation replaced by sum(p) = 1.
inline std::vector<double> stationary_solve(const std::vector<double>& a, std::size_t n) {
  Eigen::MatrixXd m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          a[r * n + c] - (r == c ? 1.0 : 0.0);
    }
  }
  m.row(static_cast<Eigen::Index>(n - 1)).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  rhs(static_cast<Eigen::Index>(n - 1)) = 1.0;
  const Eigen::VectorXd p = m.fullPivLu().solve(rhs);
  return std::vector<double>(p.data(), p.data() + p.size());
}

}  // namespace adte::testing
