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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "adte/config.hpp"
#include "adte/entropy.hpp"
#include "adte/error.hpp"
#include "adte/metrics.hpp"
#include "adte/pipeline.hpp"
#include "adte/record.hpp"

namespace adte {

// ---------------------------------------------------------------------------
// q sweep: Tsallis pipelines at several q against the Shannon baseline.
// ---------------------------------------------------------------------------

struct SweepRow {
  std::optional<double> q;  ///< empty for the Shannon baseline
  std::optional<double> accuracy;
  std::vector<double> mean_tcr;  ///< one per k
};

struct SweepTrend {
  std::size_t k = 0;
  double spearman = 0.0;       ///< rank correlation of q against mean Tcr_K
  bool non_increasing = false; ///< mean Tcr_K never rises as q grows
};

struct SweepResult {
  std::vector<std::size_t> ks;
  std::vector<SweepRow> rows;  ///< q rows in ascending q, then the baseline
  std::vector<SweepTrend> trends;
};

/// For each q runs the Tsallis pipeline (other settings from `base`) and the
/// bias-free mean Tcr_K of the views Tsallis(q) selects; appends a Shannon row.
inline SweepResult sweep_q(std::span<const InstanceRecord> records, const AdaptConfig& base,
                           std::vector<double> qs, std::vector<std::size_t> ks) {
  detail::require(!qs.empty(), ErrorKind::invalid_config, "q list is empty");
  std::sort(qs.begin(), qs.end());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    detail::require(std::isfinite(qs[i]) && qs[i] != 1.0, ErrorKind::invalid_config,
                    "q values must be finite and differ from 1");
    detail::require(i == 0 || qs[i] != qs[i - 1], ErrorKind::invalid_config,
                    "q values must be pairwise distinct");
  }
  SweepResult out;
  out.ks = std::move(ks);
  RunOptions options;
  options.tcr_ks.clear();

  for (double q : qs) {
    AdaptConfig cfg = base;
    cfg.measure = MeasureKind::tsallis;
    cfg.tsallis_q = q;
    SweepRow row;
    row.q = q;
    row.accuracy = run_stream(records, cfg, options).accuracy;
    row.mean_tcr = mean_tcr_selected(records, Tsallis{q}, base.filter_ratio, out.ks);
    out.rows.push_back(std::move(row));
  }
  AdaptConfig se = base;
  se.measure = MeasureKind::shannon;
  SweepRow baseline;
  baseline.accuracy = run_stream(records, se, options).accuracy;
  baseline.mean_tcr = mean_tcr_selected(records, Shannon{}, base.filter_ratio, out.ks);
  out.rows.push_back(std::move(baseline));

  for (std::size_t i = 0; i < out.ks.size(); ++i) {
    std::vector<double> x, y;
    for (std::size_t r = 0; r < qs.size(); ++r) {
      x.push_back(*out.rows[r].q);
      y.push_back(out.rows[r].mean_tcr[i]);
    }
    SweepTrend trend{out.ks[i], spearman(x, y), true};
    for (std::size_t r = 1; r < y.size(); ++r) {
      if (y[r] > y[r - 1]) trend.non_increasing = false;
    }
    out.trends.push_back(trend);
  }
  return out;
}

// ---------------------------------------------------------------------------
// F(p, q) grid analysis
//
// Regimes for small tail probabilities p:
//   "(1)-(2)"  q > 1:             F < 0 and increasing in q
//   "(3)"      0 < q < q*(p):     F > 0 and decreasing in q
//   "(4)"      q*(p) <= q < 1:    F > 0 and increasing in q
// where q*(p) = 1 - 1/ln(1/p) is where dF/dq changes sign.
// ---------------------------------------------------------------------------

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

inline double f_turning_point(double p) { return 1.0 - 1.0 / std::log(1.0 / p); }

struct FCell {
  double p = 0.0;
  double q = 0.0;
  double f = 0.0;        ///< rounded from the extended-precision value
  HighPrecision f_exact;
  std::string regime;
};

struct FVerdict {
  std::string regime;
  std::size_t cells = 0;
  std::size_t pairs = 0;
  std::size_t sign_violations = 0;
  std::size_t monotone_violations = 0;
  bool pass() const { return sign_violations == 0 && monotone_violations == 0; }
};

struct FAnalysis {
  std::vector<FCell> cells;  ///< p-major, q ascending within each p
  std::vector<FVerdict> verdicts;
};

inline std::string f_regime(double p, double q) {
  if (q > 1.0) return "(1)-(2)";
  return q < f_turning_point(p) ? "(3)" : "(4)";
}

inline FAnalysis analyze_f(std::span<const double> ps, std::vector<double> qs) {
  for (double p : ps) {
    detail::require(p > 0.0 && p < 1.0, ErrorKind::invalid_input, "p grid must lie in (0, 1)");
  }
  for (double q : qs) {
    detail::require(std::isfinite(q) && q > 0.0 && q != 1.0, ErrorKind::invalid_input,
                    "q grid must be positive and exclude 1");
  }
  std::sort(qs.begin(), qs.end());
  FAnalysis out;
  std::vector<FVerdict> verdicts = {{"(1)-(2)"}, {"(3)"}, {"(4)"}};
  const auto verdict_for = [&](const std::string& regime) -> FVerdict& {
    for (auto& v : verdicts) {
      if (v.regime == regime) return v;
    }
    return verdicts.front();
  };
  for (double p : ps) {
    const HighPrecision hp(p);
    const std::size_t first = out.cells.size();
    for (double q : qs) {
      FCell cell{p, q, 0.0, f_gap<HighPrecision>(hp, HighPrecision(q)), f_regime(p, q)};
      cell.f = static_cast<double>(cell.f_exact);
      auto& v = verdict_for(cell.regime);
      ++v.cells;
      const bool positive_regime = cell.regime != "(1)-(2)";
      if (positive_regime ? !(cell.f_exact > 0) : !(cell.f_exact < 0)) ++v.sign_violations;
      out.cells.push_back(std::move(cell));
    }
    for (std::size_t i = first + 1; i < out.cells.size(); ++i) {
      const auto& a = out.cells[i - 1];
      const auto& b = out.cells[i];
      if (a.regime != b.regime) continue;
      auto& v = verdict_for(a.regime);
      ++v.pairs;
      const bool decreasing = a.regime == "(3)";
      if (decreasing ? !(a.f_exact > b.f_exact) : !(a.f_exact < b.f_exact)) {
        ++v.monotone_violations;
      }
    }
  }
  for (auto& v : verdicts) {
    if (v.cells > 0) out.verdicts.push_back(v);
  }
  return out;
}

/// n log-spaced points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  detail::require(lo > 0.0 && hi > 0.0 && n >= 1, ErrorKind::invalid_input,
                  "log grid needs positive bounds");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  if (n > 1) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

/// n evenly spaced points from lo to hi inclusive.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  detail::require(n >= 1, ErrorKind::invalid_input, "grid needs at least one point");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace adte
