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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adte/error.hpp"

namespace adte {

/// One test instance: an N x L matrix of per-view logits, row-major.
struct InstanceRecord {
  std::string id;
  std::size_t num_views = 0;
  std::size_t num_classes = 0;
  std::vector<double> logits;
  std::optional<std::size_t> label;

  InstanceRecord() = default;
  InstanceRecord(std::string id_, std::size_t views, std::size_t classes,
                 std::vector<double> values, std::optional<std::size_t> label_ = std::nullopt)
      : id(std::move(id_)), num_views(views), num_classes(classes), logits(std::move(values)),
        label(label_) {
    validate();
  }

  std::span<const double> row(std::size_t view) const {
    return std::span<const double>(logits).subspan(view * num_classes, num_classes);
  }

  void validate() const {
    detail::require(num_views >= 1, ErrorKind::invalid_input,
                    "record '" + id + "' needs at least one view");
    detail::require(num_classes >= 2, ErrorKind::invalid_input,
                    "record '" + id + "' needs at least 2 classes");
    detail::require(logits.size() == num_views * num_classes, ErrorKind::invalid_input,
                    "record '" + id + "' logit count does not match N x L");
    for (double z : logits) {
      detail::require(std::isfinite(z), ErrorKind::invalid_input,
                      "record '" + id + "' has a non-finite logit");
    }
    if (label) {
      detail::require(*label < num_classes, ErrorKind::invalid_input,
                      "record '" + id + "' label out of range");
    }
  }

  friend bool operator==(const InstanceRecord&, const InstanceRecord&) = default;
};

}  // namespace adte
