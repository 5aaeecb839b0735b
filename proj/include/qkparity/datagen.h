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

/**
 * @file
 * Synthetic parity benchmark: clustered features on hypercube vertices,
 * parity relabeling, label-flip noise and the stratified train/test split.
 *
 * Column layout of a generated table:
 *   [0, n_informative)                       informative block
 *   [n_informative, n_informative+n_redundant) redundant = informative * mixing
 *   [n_informative+n_redundant, n_features)  probes, i.i.d. N(0, 1)
 *
 * Draw order on the "features" substream: vertex set (Floyd sampling),
 * mixing table (row-major, U[-1, 1]), then per sample: cluster index,
 * n_informative normals, probe normals.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qkparity/matrix.h"

namespace qkp {

struct GeneratorConfig {
    std::size_t n_samples = 800;
    std::size_t n_features = 500;
    std::size_t n_informative = 11;
    std::size_t n_redundant = 20;
    std::size_t clusters_per_class = 16;
    double class_sep = 0.25;
    double flip_y = 0.22;
    uint64_t seed = 0;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    bool operator==(const GeneratorConfig &) const = default;
};

struct Dataset {
    Matrix features;
    /// Values in {0, 1}; empty until assign_parity_labels.
    std::vector<int> labels;
    /// Always 0..n_informative-1 since columns are not shuffled.
    std::vector<std::size_t> informative_idx;
    /// Per-informative-column median over all samples; set by assign_parity_labels.
    std::vector<double> medians_full;
    GeneratorConfig config;
    uint64_t seed = 0;

    std::size_t n_samples() const { return features.rows(); }
};

struct SplitIndices {
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
};

/// Draws the feature table. Labels are left empty.
Dataset generate_features(const GeneratorConfig &config);

/// Replaces labels with the parity of median-thresholded informative columns.
Dataset assign_parity_labels(Dataset dataset);

/// Flips each label independently with probability flip_y.
Dataset apply_label_noise(Dataset dataset, double flip_y, uint64_t noise_seed);

/// Per-class shuffled partition. The test size is round(test_fraction * n), shared
/// between classes by largest remainder; both output lists are sorted ascending.
SplitIndices stratified_split(const Dataset &dataset, double test_fraction, uint64_t split_seed);

/// Parity of the strict-threshold bits of `row` against `thresholds`.
int parity_label(std::span<const double> row, std::span<const double> thresholds);

}  // namespace qkp
