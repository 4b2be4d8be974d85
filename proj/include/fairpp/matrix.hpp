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

#ifndef FAIRPP_MATRIX_HPP_
#define FAIRPP_MATRIX_HPP_

#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace fairpp {

// Dense row-major matrix of doubles. Just storage and indexing; the
// numerical kernels live with the algorithms that need them.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix Identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double RowSum(std::size_t i) const {
    auto r = row(i);
    return std::accumulate(r.begin(), r.end(), 0.0);
  }

  double ColSum(std::size_t j) const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
  }

  double Sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace fairpp

#endif  // FAIRPP_MATRIX_HPP_
