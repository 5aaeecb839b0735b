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

#include "qkparity/svm.h"

#include <cmath>
#include <map>

#include "gtest/gtest.h"
#include "qkparity/kernels.h"
#include "qkparity/rng.h"
#include "support/qp_reference.h"

using namespace qkp;
using qkp::testing::qp_reference_dual;
using qkp::testing::random_psd_kernel;
using qkp::testing::random_signed_labels;

namespace {

Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SmoOptions tight() {
    SmoOptions o;
    o.tol = 1e-8;
    return o;
}

}  // namespace

TEST(svm, two_point_identity_problem) {
    const std::vector<int> y{1, -1};
    const auto model = train(identity(2), y, 10.0);
    EXPECT_NEAR(model.alpha[0], 1.0, 1e-12);
    EXPECT_NEAR(model.alpha[1], 1.0, 1e-12);
    EXPECT_NEAR(model.bias, 0.0, 1e-12);
    const auto pred = predict(model, identity(2));
    EXPECT_NEAR(pred.decision[0], 1.0, 1e-12);
    EXPECT_NEAR(pred.decision[1], -1.0, 1e-12);
    EXPECT_EQ(pred.labels, y);
}

TEST(svm, conflicting_duplicates_hit_the_box) {
    const Matrix k(2, 2, 1.0);
    const auto model = train(k, std::vector<int>{1, -1}, 3.0);
    EXPECT_NEAR(model.alpha[0], 3.0, 1e-12);
    EXPECT_NEAR(model.alpha[1], 3.0, 1e-12);
}

TEST(svm, separable_line_is_fit_exactly) {
    const std::vector<double> xs{-2, -1, 1, 2};
    const std::vector<int> y{-1, -1, 1, 1};
    Matrix k(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) k(i, j) = xs[i] * xs[j];
    const auto model = train(k, y, 100.0, tight());
    // Hard margin: w = 1, b = 0, support vectors at +-1 with alpha 1/2 each.
    EXPECT_NEAR(model.alpha[1], 0.5, 1e-6);
    EXPECT_NEAR(model.alpha[2], 0.5, 1e-6);
    EXPECT_NEAR(model.bias, 0.0, 1e-6);
    EXPECT_EQ(accuracy(predict(model, k).labels, y), 1.0);
    EXPECT_EQ(model.support_idx, (std::vector<std::size_t>{1, 2}));
}

TEST(svm, zero_decision_maps_to_positive) {
    SvmModel m;
    m.alpha = {1.0};
    m.y_train = {1};
    m.support_idx = {0};
    m.bias = 0.0;
    EXPECT_EQ(predict(m, Matrix(1, 1, 0.0)).labels[0], 1);
}

TEST(svm, matches_reference_qp) {
    for (uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const std::size_t n = 10 + rng.below(31);
        const std::size_t rank = 2 + rng.below(n);
        const auto k = random_psd_kernel(n, rank, seed);
        const auto y = random_signed_labels(n, seed + 1000);
        const double C = std::pow(10.0, rng.uniform(-1.0, 2.0));
        const auto model = train(k, y, C, tight());
        const auto ref = qp_reference_dual(k, y, C);
        const double ours = dual_objective(model.alpha, k, y);
        const double theirs = dual_objective(ref, k, y);
        EXPECT_GE(ours, theirs - 1e-6 * std::max(1.0, std::abs(theirs))) << "seed " << seed;
        EXPECT_NEAR(ours, theirs, 1e-5 * std::max(1.0, std::abs(theirs))) << "seed " << seed;
    }
}

TEST(svm, predictions_agree_with_reference_qp) {
    // Rebuild the reference bias from its free coordinates and compare signs on
    // fresh points drawn from the same low-rank feature space.
    std::size_t agree = 0;
    std::size_t total = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed + 300);
        const std::size_t n = 25;
        const std::size_t rank = 6;
        std::vector<double> b((n + 40) * rank);
        for (auto &v : b) v = rng.normal();
        auto dot = [&](std::size_t i, std::size_t j) {
            double acc = 0.0;
            for (std::size_t r = 0; r < rank; ++r) acc += b[i * rank + r] * b[j * rank + r];
            return acc;
        };
        Matrix k(n, n);
        Matrix cross(40, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) k(i, j) = dot(i, j);
        for (std::size_t i = 0; i < 40; ++i)
            for (std::size_t j = 0; j < n; ++j) cross(i, j) = dot(n + i, j);
        const auto y = random_signed_labels(n, seed + 400);
        const double C = 1.0;
        const auto model = train(k, y, C, tight());
        const auto ref_alpha = qp_reference_dual(k, y, C);

        double bsum = 0.0;
        int nfree = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (ref_alpha[i] > 1e-6 && ref_alpha[i] < C - 1e-6) {
                double f = 0.0;
                for (std::size_t j = 0; j < n; ++j) f += ref_alpha[j] * y[j] * k(i, j);
                bsum += y[i] - f;
                ++nfree;
            }
        }
        if (nfree == 0) continue;
        SvmModel ref;
        ref.alpha = ref_alpha;
        ref.y_train = y;
        ref.bias = bsum / nfree;
        ref.C = C;
        for (std::size_t i = 0; i < n; ++i) ref.support_idx.push_back(i);
        const auto ours = predict(model, cross).labels;
        const auto theirs = predict(ref, cross).labels;
        for (std::size_t i = 0; i < ours.size(); ++i) agree += ours[i] == theirs[i];
        total += ours.size();
    }
    ASSERT_GT(total, 0u);
    EXPECT_GE(static_cast<double>(agree) / total, 0.95);
}

TEST(svm, zero_kernel_row_predicts_sign_of_bias) {
    const std::vector<int> y{1, 1, -1};
    Matrix k = identity(3);
    const auto model = train(k, y, 10.0);
    const auto pred = predict(model, Matrix(1, 3, 0.0));
    EXPECT_EQ(pred.decision[0], model.bias);
    EXPECT_EQ(pred.labels[0], model.bias >= 0 ? 1 : -1);
}

TEST(svm, two_point_optimum_has_negligible_residual) {
    const std::vector<int> y{1, -1};
    auto model = train(identity(2), y, 10.0);
    EXPECT_LE(kkt_residual(model, identity(2), y), 1e-6);
    model.alpha[0] += 0.1;
    EXPECT_GT(kkt_residual(model, identity(2), y), 0.0);
}

TEST(svm, training_accuracy_non_decreasing_in_C) {
    Rng rng(15);
    Matrix x(30, 2);
    std::vector<int> y(30);
    for (int i = 0; i < 30; ++i) {
        y[i] = i % 2 ? 1 : -1;
        x(i, 0) = y[i] * (0.2 + rng.uniform());
        x(i, 1) = rng.normal();
    }
    const auto k = gram(x, KernelSpec::linear()).values;
    double prev = 0.0;
    for (double C : {0.001, 0.01, 0.1, 1.0, 10.0, 100.0}) {
        const double acc = accuracy(predict(train(k, y, C, tight()), k).labels, y);
        EXPECT_GE(acc, prev) << "C=" << C;
        prev = acc;
    }
    EXPECT_EQ(prev, 1.0);
}

TEST(svm, converged_models_are_dual_feasible) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const auto k = random_psd_kernel(25, 7, seed + 500);
        const auto y = random_signed_labels(25, seed + 600);
        const auto m = train(k, y, 3.0);
        double balance = 0.0;
        for (std::size_t i = 0; i < 25; ++i) {
            EXPECT_GE(m.alpha[i], 0.0);
            EXPECT_LE(m.alpha[i], 3.0);
            balance += m.alpha[i] * y[i];
        }
        EXPECT_LE(std::abs(balance), 1e-6);
    }
}

TEST(svm, kkt_residual_is_small_at_convergence_and_grows_when_perturbed) {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const auto k = random_psd_kernel(30, 10, seed + 50);
        const auto y = random_signed_labels(30, seed + 60);
        SmoOptions opt;
        const auto model = train(k, y, 5.0, opt);
        const double r = kkt_residual(model, k, y);
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, opt.tol + 1e-12) << "seed " << seed;

        auto bent = model;
        for (auto &a : bent.alpha) a = std::min(bent.C, a + 0.3);
        EXPECT_GT(kkt_residual(bent, k, y), r);
    }
}

TEST(svm, dual_objective_is_monotone_in_C) {
    const auto k = random_psd_kernel(40, 8, 77);
    const auto y = random_signed_labels(40, 78);
    double prev = -1.0;
    for (double C : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        const double obj = dual_objective(train(k, y, C, tight()).alpha, k, y);
        EXPECT_GE(obj, prev - 1e-7);
        prev = obj;
    }
}

TEST(svm, deterministic) {
    const auto k = random_psd_kernel(50, 20, 5);
    const auto y = random_signed_labels(50, 6);
    const auto a = train(k, y, 2.0);
    const auto b = train(k, y, 2.0);
    EXPECT_EQ(a.alpha, b.alpha);
    EXPECT_EQ(a.bias, b.bias);
}

TEST(svm, iteration_cap_raises) {
    const auto k = random_psd_kernel(40, 20, 9);
    const auto y = random_signed_labels(40, 10);
    SmoOptions opt;
    opt.max_iterations = 1;
    opt.tol = 1e-12;
    EXPECT_THROW(train(k, y, 100.0, opt), NonConvergenceError);
}

TEST(svm, rejects_bad_problems) {
    EXPECT_THROW(train(identity(2), std::vector<int>{1, 1}, 1.0), std::invalid_argument);
    EXPECT_THROW(train(identity(2), std::vector<int>{1, 0}, 1.0), std::invalid_argument);
    EXPECT_THROW(train(identity(2), std::vector<int>{1, -1}, 0.0), std::invalid_argument);
    EXPECT_THROW(train(identity(3), std::vector<int>{1, -1}, 1.0), std::invalid_argument);
    EXPECT_THROW(predict(train(identity(2), std::vector<int>{1, -1}, 1.0), Matrix(1, 3)), std::invalid_argument);
}

TEST(cross_validation, plan_is_stratified_and_deterministic) {
    std::vector<int> y(103);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = (i % 3 == 0) ? 1 : 0;
    const auto plan = make_cv_plan(y, 5, 42);
    EXPECT_EQ(plan.fold_of, make_cv_plan(y, 5, 42).fold_of);
    std::map<std::size_t, std::pair<int, int>> counts;
    for (std::size_t i = 0; i < y.size(); ++i) (y[i] ? counts[plan.fold_of[i]].first : counts[plan.fold_of[i]].second)++;
    ASSERT_EQ(counts.size(), 5u);
    int pmin = 1000, pmax = 0, nmin = 1000, nmax = 0, tmin = 1000, tmax = 0;
    for (const auto &[f, c] : counts) {
        pmin = std::min(pmin, c.first); pmax = std::max(pmax, c.first);
        nmin = std::min(nmin, c.second); nmax = std::max(nmax, c.second);
        tmin = std::min(tmin, c.first + c.second); tmax = std::max(tmax, c.first + c.second);
    }
    EXPECT_LE(pmax - pmin, 1);
    EXPECT_LE(nmax - nmin, 1);
    EXPECT_LE(tmax - tmin, 1);
}

TEST(cross_validation, single_cell_grid_returns_that_cell) {
    const auto k = random_psd_kernel(40, 10, 3);
    auto y = random_signed_labels(40, 4);
    GridSpec grid;
    grid.C_values = {2.5};
    const auto res = cross_validate(k, y, grid, make_cv_plan(y, 5, 1));
    EXPECT_EQ(res.best.C, 2.5);
    ASSERT_EQ(res.cells.size(), 1u);
    EXPECT_GE(res.best.mean_accuracy, 0.0);
    EXPECT_LE(res.best.mean_accuracy, 1.0);
}

TEST(cross_validation, ties_prefer_smaller_parameters) {
    // A constant kernel predicts one class everywhere for every C, so all cells tie.
    const Matrix k(20, 20, 1.0);
    std::vector<int> y(20);
    for (int i = 0; i < 20; ++i) y[i] = i % 2 ? 1 : -1;
    GridSpec grid;
    grid.C_values = {100.0, 1.0, 10.0, 1.0};
    const auto res = cross_validate(k, y, grid, make_cv_plan(y, 5, 2));
    EXPECT_EQ(res.best.C, 1.0);

    GridSpec with_gamma;
    with_gamma.C_values = {10.0, 1.0};
    with_gamma.gamma_values = {5.0, 0.5};
    const auto res2 = cross_validate([&](std::optional<double>) { return k; }, y, with_gamma, make_cv_plan(y, 5, 2));
    EXPECT_EQ(res2.best.C, 1.0);
    EXPECT_EQ(res2.best.gamma, 0.5);
    EXPECT_EQ(res2.cells.size(), 4u);
}

TEST(cross_validation, picks_informative_kernel_parameter) {
    Rng rng(1);
    Matrix x(60, 2);
    std::vector<int> y(60);
    for (int i = 0; i < 60; ++i) {
        y[i] = i % 2 ? 1 : -1;
        x(i, 0) = y[i] * 1.5 + 0.3 * rng.normal();
        x(i, 1) = rng.normal();
    }
    GridSpec grid;
    grid.C_values = {1.0};
    grid.gamma_values = {1e4, 0.5};
    const auto res = cross_validate([&](std::optional<double> g) { return gram(x, KernelSpec::rbf(*g)).values; }, y,
                                    grid, make_cv_plan(y, 5, 3));
    EXPECT_EQ(res.best.gamma, 0.5);
    EXPECT_GE(res.best.mean_accuracy, 0.9);
}

TEST(cross_validation, grid_validation) {
    GridSpec grid;
    EXPECT_THROW(grid.validate(), std::invalid_argument);
    grid.C_values = {1.0, -1.0};
    EXPECT_THROW(grid.validate(), std::invalid_argument);
    grid.C_values = {1.0};
    grid.gamma_values = {1.0};
    grid.offset_values = {1.0};
    EXPECT_THROW(grid.validate(), std::invalid_argument);
    std::vector<int> y{1, -1, 1, -1};
    GridSpec g2;
    g2.C_values = {1.0};
    g2.gamma_values = {1.0};
    EXPECT_THROW(cross_validate(identity(4), y, g2, make_cv_plan(y, 2, 0)), std::invalid_argument);
}
