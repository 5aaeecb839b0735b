// Copyright 2026 The qkparity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qkp {

/// Dense row-major table of doubles. Used for feature tables and Gram matrices.
class Matrix {
   public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    std::vector<double> column(std::size_t c) const;

    /// Rows at `rows`, in that order.
    Matrix take_rows(std::span<const std::size_t> rows) const;
    /// Columns at `cols`, in that order.
    Matrix take_cols(std::span<const std::size_t> cols) const;
    /// Submatrix at the cross product of `rows` and `cols` (sub-Gram extraction).
    Matrix take(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

    bool operator==(const Matrix &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Median with the even-count convention: mean of the two central order statistics.
/// Throws std::invalid_argument on empty input.
double median(std::vector<double> values);

}  // namespace qkp
