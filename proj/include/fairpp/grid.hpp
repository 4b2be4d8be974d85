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

#ifndef FAIRPP_GRID_HPP_
#define FAIRPP_GRID_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "fairpp/errors.hpp"

namespace fairpp {

// Uniform partition of [lower, upper] into `bins` cells, represented by the
// cell midpoints. Bin indices are zero-based throughout the library.
class Grid {
 public:
  Grid(double lower, double upper, std::size_t bins)
      : lower_(lower), upper_(upper), bins_(bins) {
    if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
      std::ostringstream msg;
      msg << "interval [" << lower << ", " << upper << "] is empty";
      throw Error(ErrorKind::kInvalidInterval, msg.str());
    }
    if (bins == 0) {
      throw Error(ErrorKind::kInvalidBins, "bin count must be positive");
    }
    const double width = (upper - lower) / static_cast<double>(bins);
    midpoints_.reserve(bins);
    for (std::size_t j = 0; j < bins; ++j) {
      midpoints_.push_back(lower + (static_cast<double>(j) + 0.5) * width);
    }
  }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double length() const { return upper_ - lower_; }
  std::size_t size() const { return bins_; }
  double bin_width() const { return length() / static_cast<double>(bins_); }
  double midpoint(std::size_t j) const { return midpoints_[j]; }
  std::span<const double> midpoints() const { return midpoints_; }

  // Index of the nearest midpoint. Values outside [lower, upper] clamp to
  // the end bins; an exact tie between two midpoints goes to the lower one.
  std::size_t Discretize(double y) const {
    if (std::isnan(y)) {
      throw Error(ErrorKind::kInvalidParameter, "cannot discretize NaN");
    }
    const double scaled = (y - lower_) / bin_width() - 0.5;
    if (!(scaled > 0.0)) return 0;
    if (scaled >= static_cast<double>(bins_ - 1)) return bins_ - 1;
    // Candidate from the scaled coordinate, then settle against the actual
    // midpoints so rounding in `scaled` cannot break the tie rule.
    std::size_t j = static_cast<std::size_t>(std::floor(scaled));
    if (j + 1 < bins_) {
      const double below = std::abs(y - midpoints_[j]);
      const double above = std::abs(y - midpoints_[j + 1]);
      if (above < below) ++j;
    }
    while (j > 0 && std::abs(y - midpoints_[j - 1]) <= std::abs(y - midpoints_[j])) --j;
    while (j + 1 < bins_ && std::abs(y - midpoints_[j + 1]) < std::abs(y - midpoints_[j])) ++j;
    return j;
  }

  bool Contains(double y) const { return y >= lower_ && y <= upper_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.lower_ == b.lower_ && a.upper_ == b.upper_ && a.bins_ == b.bins_;
  }

 private:
  double lower_;
  double upper_;
  std::size_t bins_;
  std::vector<double> midpoints_;
};

inline Grid MakeGrid(double lower, double upper, std::size_t bins) {
  return Grid(lower, upper, bins);
}

}  // namespace fairpp

#endif  // FAIRPP_GRID_HPP_
