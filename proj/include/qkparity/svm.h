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
 * Binary C-SVM over precomputed kernels.
 *
 * The dual
 *
 *     max_a  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
 *     s.t.   0 <= a_i <= C,  sum_i a_i y_i = 0
 *
 * is solved by SMO: each step updates the pair formed by the maximal KKT
 * violator i and the partner j with the largest second-order gain. The decision
 * function is f(x) = sum_i a_i y_i K(x_i, x) + bias.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkparity/matrix.h"

namespace qkp {

struct SmoOptions {
    /// Stop when the maximal violating pair gap drops to tol.
    double tol = 1e-3;
    /// Alphas above this count as support vectors.
    double support_epsilon = 1e-8;
    /// Pair updates before giving up.
    std::size_t max_iterations = 10'000'000;
};

struct SvmModel {
    std::vector<double> alpha;
    double bias = 0.0;
    std::vector<int> y_train;  ///< -1 / +1
    std::vector<std::size_t> support_idx;
    double C = 1.0;
    std::size_t iterations = 0;
};

/// Thrown when SMO hits its iteration cap.
class NonConvergenceError : public std::runtime_error {
   public:
    NonConvergenceError(std::size_t iterations, double residual);
    std::size_t iterations() const { return iterations_; }
    double residual() const { return residual_; }

   private:
    std::size_t iterations_;
    double residual_;
};

/// Maps {0, 1} labels to {-1, +1}.
std::vector<int> to_signed_labels(std::span<const int> labels01);

SvmModel train(const Matrix &k_train, std::span<const int> y, double C, const SmoOptions &options = {});

struct Prediction {
    std::vector<int> labels;  ///< -1 / +1; a decision value of exactly 0 maps to +1
    std::vector<double> decision;
};

/// `k_eval` has one row per evaluated sample and one column per training sample.
Prediction predict(const SvmModel &model, const Matrix &k_eval);

/// Largest violation of the optimality conditions of (alpha, bias): box and
/// equality constraints, and the per-sample margin conditions
/// y f = 1 (free), y f >= 1 (alpha = 0), y f <= 1 (alpha = C).
double kkt_residual(const SvmModel &model, const Matrix &k_train, std::span<const int> y);

/// Dual objective sum(alpha) - 1/2 alpha^T Q alpha.
double dual_objective(std::span<const double> alpha, const Matrix &k, std::span<const int> y);

double accuracy(std::span<const int> predicted, std::span<const int> truth);

nlohmann::json model_to_json(const SvmModel &model);

// Cross-validation --------------------------------------------------------------

struct CvPlan {
    std::size_t folds = 5;
    std::vector<std::size_t> fold_of;  ///< fold index per training sample
    uint64_t fold_seed = 0;
};

/// Stratified fold assignment: each class is shuffled and dealt round-robin.
CvPlan make_cv_plan(std::span<const int> labels, std::size_t folds, uint64_t fold_seed);

/// C values plus at most one secondary kernel parameter (gamma or offset).
struct GridSpec {
    std::vector<double> C_values;
    std::vector<double> gamma_values;
    std::vector<double> offset_values;

    void validate() const;
};

struct GridCell {
    double C = 1.0;
    std::optional<double> gamma;
    std::optional<double> offset;
    double mean_accuracy = 0.0;
};

struct CvResult {
    GridCell best;
    std::vector<GridCell> cells;  ///< grid order: secondary parameter outer, C inner
};

/// Training Gram for a secondary parameter value (gamma or offset, or nullopt).
using GramSource = std::function<Matrix(std::optional<double>)>;

/// Highest mean fold accuracy wins; ties go to smaller C, then the smaller
/// secondary parameter, then the earlier cell.
CvResult cross_validate(const GramSource &source, std::span<const int> y, const GridSpec &grid, const CvPlan &plan,
                        const SmoOptions &options = {});

/// Fixed-kernel overload; the grid must not carry gamma or offset values.
CvResult cross_validate(const Matrix &k_train, std::span<const int> y, const GridSpec &grid, const CvPlan &plan,
                        const SmoOptions &options = {});

}  // namespace qkp
