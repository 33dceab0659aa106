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
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "adte/error.hpp"

namespace adte {

/// Tolerance on the total mass of a ProbVector.
inline constexpr double kSimplexTolerance = 1e-9;
/// Distance from q = 1 below which Tsallis entropy is evaluated as Shannon.
inline constexpr double kShannonLimitBand = 1e-9;
/// Floor applied before taking a log in Shannon entropy.
inline constexpr double kLogFloor = 1e-300;

/// A probability distribution over L >= 2 classes.
class ProbVector {
 public:
  ProbVector() = default;

  /// Takes ownership of `values`, which must already lie on the simplex.
  explicit ProbVector(std::vector<double> values) : values_(std::move(values)) {
    validate();
  }

  /// Rescales non-negative weights to unit mass.
  static ProbVector normalized(std::vector<double> weights) {
    detail::require(weights.size() >= 2, ErrorKind::invalid_input,
                    "probability vector needs at least 2 classes");
    double total = 0.0;
    for (double w : weights) {
      detail::require(std::isfinite(w) && w >= 0.0, ErrorKind::invalid_input,
                      "weights must be finite and non-negative");
      total += w;
    }
    detail::require(total > 0.0, ErrorKind::invalid_input, "weights sum to zero");
    for (double& w : weights) w /= total;
    return ProbVector(std::move(weights));
  }

  static ProbVector uniform(std::size_t classes) {
    return normalized(std::vector<double>(classes, 1.0));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  /// Index of the largest entry; ties resolve to the lowest index.
  std::size_t argmax() const noexcept {
    return static_cast<std::size_t>(std::max_element(values_.begin(), values_.end()) -
                                    values_.begin());
  }

  double max() const noexcept { return values_[argmax()]; }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  void validate() const {
    detail::require(values_.size() >= 2, ErrorKind::invalid_input,
                    "probability vector needs at least 2 classes");
    double total = 0.0;
    for (double v : values_) {
      detail::require(std::isfinite(v) && v >= 0.0, ErrorKind::invalid_input,
                      "probabilities must be finite and non-negative");
      total += v;
    }
    detail::require(std::abs(total - 1.0) <= kSimplexTolerance, ErrorKind::invalid_input,
                    "probabilities must sum to 1, got " + std::to_string(total));
  }

  std::vector<double> values_;
};

/// Per-class non-extensive parameters, all inside [alpha, beta] with
/// 0 < alpha <= beta < 1.
struct QProfile {
  std::vector<double> q;
  double alpha = 0.01;
  double beta = 0.9;

  std::size_t size() const noexcept { return q.size(); }

  void validate() const {
    detail::require(alpha > 0.0 && alpha <= beta && beta < 1.0, ErrorKind::invalid_profile,
                    "profile interval must satisfy 0 < alpha <= beta < 1");
    for (double v : q) {
      detail::require(v >= alpha && v <= beta, ErrorKind::invalid_profile,
                      "profile entry outside [alpha, beta]");
    }
  }

  static QProfile constant(std::size_t classes, double value, double alpha, double beta) {
    QProfile profile{std::vector<double>(classes, value), alpha, beta};
    profile.validate();
    return profile;
  }
};

/// Numerically safe exp-normalization. Logits are used as given: no temperature.
inline ProbVector softmax(std::span<const double> logits) {
  detail::require(logits.size() >= 2, ErrorKind::invalid_input,
                  "softmax needs at least 2 logits");
  double top = -std::numeric_limits<double>::infinity();
  for (double z : logits) {
    detail::require(std::isfinite(z), ErrorKind::invalid_input, "non-finite logit");
    top = std::max(top, z);
  }
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return ProbVector(std::move(out));
}

/// -sum p log p with 0 log 0 = 0.
inline double shannon_entropy(const ProbVector& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(std::max(v, kLogFloor));
  }
  return h;
}

/// (sum p^q - 1) / (1 - q). Near q = 1 this is the Shannon entropy.
///
/// The numerator is accumulated as sum p (p^{q-1} - 1) + (sum p - 1), which is
/// algebraically identical but keeps full precision when q is close to 1.
inline double tsallis_entropy(const ProbVector& p, double q) {
  detail::require(std::isfinite(q), ErrorKind::invalid_input, "tsallis q must be finite");
  if (std::abs(q - 1.0) < kShannonLimitBand) return shannon_entropy(p);
  double excess = 0.0;
  double mass = 0.0;
  for (double v : p) {
    mass += v;
    if (v == 0.0) {
      detail::require(q > 0.0, ErrorKind::undefined_term,
                      "0^q diverges for q <= 0 on a zero-probability class");
      continue;
    }
    excess += v * std::expm1((q - 1.0) * std::log(v));
  }
  return (excess + (mass - 1.0)) / (1.0 - q);
}

/// sum_l p_l^{q_l} / (1 - q_l). The class-independent constant of the Tsallis
/// form is dropped, so a constant profile gives tsallis_entropy + 1/(1-q).
inline double adte_entropy(const ProbVector& p, std::span<const double> q) {
  detail::require(q.size() == p.size(), ErrorKind::invalid_profile,
                  "profile length " + std::to_string(q.size()) + " != classes " +
                      std::to_string(p.size()));
  double h = 0.0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    const double ql = q[l];
    detail::require(ql > 0.0 && ql < 1.0, ErrorKind::invalid_profile,
                    "profile entries must lie in (0, 1)");
    if (p[l] > 0.0) h += std::pow(p[l], ql) / (1.0 - ql);
  }
  return h;
}

inline double adte_entropy(const ProbVector& p, const QProfile& profile) {
  return adte_entropy(p, std::span<const double>(profile.q));
}

/// Gap between the per-class Tsallis term and the Shannon term,
/// F(p, q) = p^q / (1 - q) + p log p, for a single class probability in (0, 1).
///
/// Templated on the scalar so grid studies can run in extended precision: for
/// q >> 1 and small p the first term falls below double resolution of the second.
template <typename Real>
Real f_gap(const Real& p, const Real& q) {
  using std::log;
  using std::pow;
  detail::require(p > Real(0) && p < Real(1), ErrorKind::invalid_input,
                  "f_gap needs 0 < p < 1");
  detail::require(q != Real(1), ErrorKind::undefined_term, "f_gap is undefined at q = 1");
  return Real(pow(p, q) / (Real(1) - q) + p * log(p));
}

inline double f_gap(double p, double q) { return f_gap<double>(p, q); }

struct Shannon {};
struct Tsallis {
  double q = 0.5;
};
struct AdaptiveTsallis {
  std::span<const double> q;
};

using EntropyMeasure = std::variant<Shannon, Tsallis, AdaptiveTsallis>;

inline double entropy_of(const EntropyMeasure& measure, const ProbVector& p) {
  return std::visit(
      [&p](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Shannon>) {
          return shannon_entropy(p);
        } else if constexpr (std::is_same_v<M, Tsallis>) {
          return tsallis_entropy(p, m.q);
        } else {
          return adte_entropy(p, m.q);
        }
      },
      measure);
}

}  // namespace adte
