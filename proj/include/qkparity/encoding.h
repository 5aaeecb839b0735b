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

#include <vector>

#include "qkparity/datagen.h"
#include "qkparity/matrix.h"

namespace qkp {

/// Per-column median thresholds fitted on training rows.
struct Thresholds {
    std::vector<double> medians;
};

/// Per-column range fitted on training rows.
struct ScalerParams {
    std::vector<double> min;
    std::vector<double> max;
};

/// The informative columns of `dataset`, in index order.
Matrix select_informative(const Dataset &dataset);

Thresholds fit_thresholds(const Matrix &train_view);

/// Entry is pi when value > threshold, else 0.
Matrix encode_binary(const Matrix &view, const Thresholds &thresholds);

ScalerParams fit_scaler(const Matrix &train_view);

/// Min-max scaling to [0, 2*pi]. Constant training columns map to 0; values
/// outside the training range are clamped.
Matrix scale_minmax(const Matrix &view, const ScalerParams &params);

}  // namespace qkp
