// Copyright 2026 The fairpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRPP_SAMPLES_HPP_
#define FAIRPP_SAMPLES_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairpp/errors.hpp"

namespace fairpp {

// One post-processing example: the sensitive group, the regressor output on
// it, and optionally the ground-truth target (needed only for evaluation).
struct Sample {
  std::size_t group = 0;
  double score = 0.0;
  std::optional<double> label;
};

// Affine map between raw target units and the internal scale:
// internal = (raw - offset) / scale.
struct AffineScale {
  double offset = 0.0;
  double scale = 1.0;

  double ToInternal(double raw) const { return (raw - offset) / scale; }
  double ToRaw(double internal) const { return offset + scale * internal; }
  bool IsIdentity() const { return offset == 0.0 && scale == 1.0; }
};

// Rows of (group, score, label). `groups` fixes the group label set and
// its order; `Sample::group` indexes into it.
struct GroupedSamples {
  std::vector<std::string> groups;
  std::vector<Sample> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  std::size_t num_groups() const { return groups.size(); }

  std::optional<std::size_t> FindGroup(std::string_view label) const {
    for (std::size_t a = 0; a < groups.size(); ++a) {
      if (groups[a] == label) return a;
    }
    return std::nullopt;
  }

  // Index of `label`, appending it if new.
  std::size_t InternGroup(std::string_view label) {
    if (auto found = FindGroup(label)) return *found;
    groups.emplace_back(label);
    return groups.size() - 1;
  }

  void Validate() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].group >= groups.size()) {
        throw Error(ErrorKind::kInvalidParameter,
                    "row " + std::to_string(i) + " has group index " +
                        std::to_string(rows[i].group) + " but only " +
                        std::to_string(groups.size()) + " groups exist");
      }
    }
  }
};

}  // namespace fairpp

#endif  // FAIRPP_SAMPLES_HPP_
