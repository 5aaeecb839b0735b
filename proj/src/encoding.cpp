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

#include "qkparity/encoding.h"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qkp {

namespace {

void check_columns(const Matrix &view, std::size_t expected, const char *what) {
    if (view.cols() != expected) {
        throw std::invalid_argument(std::string(what) + ": view has " + std::to_string(view.cols()) +
                                    " columns, parameters were fitted on " + std::to_string(expected));
    }
}

}  // namespace

Matrix select_informative(const Dataset &dataset) {
    for (std::size_t idx : dataset.informative_idx) {
        if (idx >= dataset.features.cols()) {
            throw std::invalid_argument("informative index out of range");
        }
    }
    return dataset.features.take_cols(dataset.informative_idx);
}

Thresholds fit_thresholds(const Matrix &train_view) {
    if (train_view.rows() == 0 || train_view.cols() == 0) {
        throw std::invalid_argument("fit_thresholds: empty training view");
    }
    Thresholds t;
    t.medians.reserve(train_view.cols());
    for (std::size_t c = 0; c < train_view.cols(); ++c) {
        t.medians.push_back(median(train_view.column(c)));
    }
    return t;
}

Matrix encode_binary(const Matrix &view, const Thresholds &thresholds) {
    check_columns(view, thresholds.medians.size(), "encode_binary");
    Matrix out(view.rows(), view.cols());
    for (std::size_t r = 0; r < view.rows(); ++r) {
        for (std::size_t c = 0; c < view.cols(); ++c) {
            out(r, c) = view(r, c) > thresholds.medians[c] ? std::numbers::pi : 0.0;
        }
    }
    return out;
}

ScalerParams fit_scaler(const Matrix &train_view) {
    if (train_view.rows() == 0 || train_view.cols() == 0) {
        throw std::invalid_argument("fit_scaler: empty training view");
    }
    ScalerParams p;
    for (std::size_t c = 0; c < train_view.cols(); ++c) {
        const auto col = train_view.column(c);
        const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        p.min.push_back(*lo);
        p.max.push_back(*hi);
    }
    return p;
}

Matrix scale_minmax(const Matrix &view, const ScalerParams &params) {
    check_columns(view, params.min.size(), "scale_minmax");
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    Matrix out(view.rows(), view.cols());
    for (std::size_t c = 0; c < view.cols(); ++c) {
        const double lo = params.min[c];
        const double range = params.max[c] - lo;
        for (std::size_t r = 0; r < view.rows(); ++r) {
            if (range <= 0.0) {
                out(r, c) = 0.0;
                continue;
            }
            const double scaled = (view(r, c) - lo) / range * kTwoPi;
            out(r, c) = std::clamp(scaled, 0.0, kTwoPi);
        }
    }
    return out;
}

}  // namespace qkp
