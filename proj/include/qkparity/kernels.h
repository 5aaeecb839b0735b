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
 * Gram matrix assembly for the quantum fidelity kernel and the classical
 * baselines, plus kernel-target alignment.
 */
#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkparity/matrix.h"
#include "qkparity/qsim.h"

namespace qkp {

enum class KernelKind { quantum_zz, rbf, linear, poly };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double gamma = 1.0;   ///< rbf: exp(-gamma |x - y|^2)
    int degree = 3;       ///< poly: (x.y + offset)^degree
    double offset = 0.0;  ///< poly
    /// poly only: K(x, y) / sqrt(K(x, x) K(y, y)). Zero self-similarity gives 0.
    bool normalize = true;
    FeatureMapConfig feature_map;  ///< quantum_zz

    static KernelSpec rbf(double gamma);
    static KernelSpec linear();
    static KernelSpec poly(int degree, double offset, bool normalize = true);
    static KernelSpec quantum(const FeatureMapConfig &feature_map);

    void validate() const;
};

nlohmann::json kernel_spec_to_json(const KernelSpec &spec);
KernelSpec kernel_spec_from_json(const nlohmann::json &j);

struct GramMatrix {
    Matrix values;
    std::vector<std::size_t> row_ids;
    std::vector<std::size_t> col_ids;
    KernelSpec spec;

    std::size_t rows() const { return values.rows(); }
    std::size_t cols() const { return values.cols(); }
};

struct GramOptions {
    /// Worker threads for entry evaluation; results do not depend on this.
    std::size_t threads = 1;
    /// Shared state memo for quantum_zz; a private one is used when null.
    StateCache *cache = nullptr;
};

/// Square Gram of the rows of `x`. Row/column ids default to 0..rows-1.
GramMatrix gram(const Matrix &x, const KernelSpec &spec, const GramOptions &options = {});

/// Rectangular Gram: rows = `eval_rows`, cols = `train_rows`.
GramMatrix cross_gram(const Matrix &eval_rows, const Matrix &train_rows, const KernelSpec &spec,
                      const GramOptions &options = {});

/// Uncentered alignment <K, yy^T>_F / (|K|_F |yy^T|_F), labels in {0, 1} mapped to -1/+1.
double kta(const Matrix &k, std::span<const int> labels);

/// Smallest eigenvalue of (K + K^T) / 2.
double min_eigenvalue(const Matrix &k);

/// Largest |K(i, j) - K(j, i)|.
double asymmetry(const Matrix &k);

void write_gram_csv(const GramMatrix &gram, const std::filesystem::path &path);

/// Binary layout: the line "QKPGRAM1", one line of JSON header (rows, cols,
/// row_ids, col_ids, spec), then rows*cols little-endian float64 values, row-major.
void write_gram_binary(const GramMatrix &gram, const std::filesystem::path &path);
GramMatrix read_gram_binary(const std::filesystem::path &path);

}  // namespace qkp
