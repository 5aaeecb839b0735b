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

#include "qkparity/kernels.h"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "gtest/gtest.h"
#include "qkparity/rng.h"

using namespace qkp;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix random_rows(std::size_t rows, std::size_t cols, uint64_t seed, bool binary = false) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (auto &v : m.data()) v = binary ? (rng.below(2) ? kPi : 0.0) : rng.uniform(0, 2 * kPi);
    return m;
}

KernelSpec quantum_spec(std::size_t n) {
    FeatureMapConfig fm;
    fm.n_qubits = n;
    fm.reps = 3;
    return KernelSpec::quantum(fm);
}

std::vector<KernelSpec> all_specs(std::size_t n) {
    return {quantum_spec(n), KernelSpec::rbf(0.1), KernelSpec::linear(), KernelSpec::poly(11, 1.0),
            KernelSpec::poly(3, 0.0, false)};
}

}  // namespace

TEST(kernels, gram_is_symmetric_with_unit_diagonal_where_expected) {
    const auto x = random_rows(25, 5, 1);
    for (const auto &spec : all_specs(5)) {
        const auto g = gram(x, spec).values;
        EXPECT_EQ(asymmetry(g), 0.0) << to_string(spec.kind);
        if (spec.kind == KernelKind::quantum_zz || spec.kind == KernelKind::rbf ||
            (spec.kind == KernelKind::poly && spec.normalize)) {
            for (std::size_t i = 0; i < 25; ++i) EXPECT_NEAR(g(i, i), 1.0, 1e-10);
        }
    }
}

TEST(kernels, gram_is_positive_semidefinite) {
    const auto x = random_rows(40, 6, 2);
    for (const auto &spec : {quantum_spec(6), KernelSpec::rbf(0.5), KernelSpec::linear()}) {
        EXPECT_GE(min_eigenvalue(gram(x, spec).values), -1e-8) << to_string(spec.kind);
    }
    EXPECT_GE(min_eigenvalue(gram(random_rows(40, 6, 3, true), quantum_spec(6)).values), -1e-8);
}

TEST(kernels, quantum_entries_match_state_fidelities) {
    const auto x = random_rows(8, 4, 4);
    FeatureMapConfig fm;
    fm.n_qubits = 4;
    const auto g = gram(x, KernelSpec::quantum(fm)).values;
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            const double f = fidelity(prepare_state(x.row(i), fm), prepare_state(x.row(j), fm));
            EXPECT_NEAR(g(i, j), f, 1e-12);
        }
    }
}

TEST(kernels, classical_formulas) {
    Matrix x(2, 2);
    x(0, 0) = 1; x(0, 1) = 2;
    x(1, 0) = 3; x(1, 1) = -1;
    const auto rbf = gram(x, KernelSpec::rbf(0.25)).values;
    EXPECT_NEAR(rbf(0, 1), std::exp(-0.25 * 13.0), 1e-15);
    const auto lin = gram(x, KernelSpec::linear()).values;
    EXPECT_EQ(lin(0, 1), 1.0);
    EXPECT_EQ(lin(0, 0), 5.0);
    const auto poly = gram(x, KernelSpec::poly(2, 1.0, false)).values;
    EXPECT_EQ(poly(0, 1), 4.0);
    const auto npoly = gram(x, KernelSpec::poly(2, 1.0, true)).values;
    EXPECT_NEAR(npoly(0, 1), 4.0 / std::sqrt(36.0 * 121.0), 1e-15);
}

TEST(kernels, normalized_poly_with_zero_self_similarity_is_zero) {
    Matrix x(2, 3, 0.0);
    x(1, 0) = 1.0;
    const auto g = gram(x, KernelSpec::poly(11, 0.0, true)).values;
    EXPECT_EQ(g(0, 0), 0.0);
    EXPECT_EQ(g(0, 1), 0.0);
    EXPECT_NEAR(g(1, 1), 1.0, 1e-15);
}

TEST(kernels, cross_gram_agrees_with_gram) {
    const auto x = random_rows(12, 4, 5);
    for (const auto &spec : all_specs(4)) {
        const auto g = gram(x, spec).values;
        const auto c = cross_gram(x, x, spec).values;
        for (std::size_t i = 0; i < 12; ++i) {
            for (std::size_t j = 0; j < 12; ++j) ASSERT_NEAR(c(i, j), g(i, j), 1e-12) << to_string(spec.kind);
        }
    }
    const auto eval = random_rows(3, 4, 6);
    const auto c = cross_gram(eval, x, KernelSpec::rbf(1.0));
    EXPECT_EQ(c.rows(), 3u);
    EXPECT_EQ(c.cols(), 12u);
}

TEST(kernels, duplicate_rows_give_identical_gram_rows) {
    auto x = random_rows(10, 5, 7);
    for (std::size_t c = 0; c < 5; ++c) x(9, c) = x(2, c);
    const auto g = gram(x, quantum_spec(5)).values;
    for (std::size_t j = 0; j < 10; ++j) EXPECT_EQ(g(2, j), g(9, j));
    EXPECT_NEAR(g(2, 9), 1.0, 1e-10);
}

TEST(kernels, thread_count_does_not_change_values) {
    const auto x = random_rows(30, 6, 8);
    GramOptions one;
    GramOptions four;
    four.threads = 4;
    EXPECT_EQ(gram(x, quantum_spec(6), one).values, gram(x, quantum_spec(6), four).values);
    EXPECT_EQ(gram(x, KernelSpec::rbf(0.3), one).values, gram(x, KernelSpec::rbf(0.3), four).values);
}

TEST(kernels, shared_cache_is_used) {
    const auto x = random_rows(10, 4, 9);
    FeatureMapConfig fm;
    fm.n_qubits = 4;
    StateCache cache(fm);
    GramOptions opt;
    opt.cache = &cache;
    gram(x, KernelSpec::quantum(fm), opt);
    EXPECT_EQ(cache.size(), 10u);
    cross_gram(x, x, KernelSpec::quantum(fm), opt);
    EXPECT_EQ(cache.misses(), 10u);

    FeatureMapConfig other = fm;
    other.reps = 2;
    StateCache wrong(other);
    opt.cache = &wrong;
    EXPECT_THROW(gram(x, KernelSpec::quantum(fm), opt), std::invalid_argument);
}

TEST(kernels, rejects_bad_inputs) {
    auto x = random_rows(4, 3, 10);
    EXPECT_THROW(gram(x, quantum_spec(4)), std::invalid_argument);
    EXPECT_THROW(gram(x, KernelSpec::rbf(-1.0)), std::invalid_argument);
    EXPECT_THROW(gram(x, KernelSpec::poly(0, 1.0)), std::invalid_argument);
    x(1, 1) = std::nan("");
    EXPECT_THROW(gram(x, KernelSpec::rbf(1.0)), std::invalid_argument);
}

TEST(kernels, kta_examples) {
    Matrix ideal(4, 4);
    const std::vector<int> y{1, 1, 0, 0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ideal(i, j) = (y[i] == y[j]) ? 1.0 : -1.0;
    EXPECT_NEAR(kta(ideal, y), 1.0, 1e-15);

    Matrix identity(4, 4);
    for (int i = 0; i < 4; ++i) identity(i, i) = 1.0;
    // <I, yy^T> = 4, |I| = 2, |yy^T| = 4.
    EXPECT_NEAR(kta(identity, y), 0.5, 1e-15);

    Matrix ones(4, 4, 1.0);
    EXPECT_NEAR(kta(ones, y), 0.0, 1e-15);

    EXPECT_EQ(kta(Matrix(4, 4, 0.0), y), 0.0);
    EXPECT_THROW(kta(identity, std::vector<int>{1, 1, 1, 1}), std::invalid_argument);
    EXPECT_THROW(kta(identity, std::vector<int>{1, 0}), std::invalid_argument);
}

TEST(kernels, kta_is_scale_invariant_and_bounded) {
    const auto x = random_rows(30, 5, 11);
    const auto g = gram(x, quantum_spec(5)).values;
    Rng rng(12);
    std::vector<int> y(30);
    for (auto &v : y) v = static_cast<int>(rng.below(2));
    y[0] = 0;
    y[1] = 1;
    auto scaled = g;
    for (auto &v : scaled.data()) v *= 7.5;
    const double a = kta(g, y);
    EXPECT_NEAR(a, kta(scaled, y), 1e-12);
    EXPECT_LE(std::abs(a), 1.0);
}

TEST(kernels, spec_json_round_trip) {
    for (const auto &spec : all_specs(3)) {
        const auto back = kernel_spec_from_json(kernel_spec_to_json(spec));
        EXPECT_EQ(back.kind, spec.kind);
        EXPECT_EQ(kernel_spec_to_json(back), kernel_spec_to_json(spec));
    }
    EXPECT_THROW(kernel_kind_from_string("sigmoid"), std::invalid_argument);
}

TEST(kernels, gram_binary_round_trip) {
    const auto x = random_rows(7, 3, 13);
    auto g = gram(x, quantum_spec(3));
    const auto path = std::filesystem::temp_directory_path() / "qkp_gram_test.bin";
    write_gram_binary(g, path);
    const auto back = read_gram_binary(path);
    EXPECT_EQ(back.values, g.values);
    EXPECT_EQ(back.row_ids, g.row_ids);
    EXPECT_EQ(kernel_spec_to_json(back.spec), kernel_spec_to_json(g.spec));
    std::filesystem::remove(path);
}
