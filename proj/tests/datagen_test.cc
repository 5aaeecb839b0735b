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

#include "qkparity/datagen.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "gtest/gtest.h"
#include "qkparity/dataset_io.h"
#include "qkparity/rng.h"

using namespace qkp;

namespace {

GeneratorConfig headline_config(uint64_t seed) {
    GeneratorConfig c;
    c.n_samples = 800;
    c.n_features = 500;
    c.n_informative = 11;
    c.n_redundant = 20;
    c.clusters_per_class = 16;
    c.class_sep = 0.25;
    c.flip_y = 0.0;
    c.seed = seed;
    return c;
}

Dataset labelled(const GeneratorConfig &c) { return assign_parity_labels(generate_features(c)); }

}  // namespace

TEST(datagen, headline_shape_and_informative_block) {
    const auto ds = generate_features(headline_config(0));
    ASSERT_EQ(ds.features.rows(), 800u);
    ASSERT_EQ(ds.features.cols(), 500u);
    ASSERT_EQ(ds.informative_idx.size(), 11u);
    for (std::size_t k = 0; k < 11; ++k) {
        ASSERT_EQ(ds.informative_idx[k], k);
    }
    ASSERT_TRUE(ds.labels.empty());
}

TEST(datagen, zero_separation_is_standard_normal) {
    GeneratorConfig c;
    c.n_samples = 20000;
    c.n_features = 1;
    c.n_informative = 1;
    c.n_redundant = 0;
    c.clusters_per_class = 1;
    c.class_sep = 0.0;
    c.seed = 3;
    const auto col = generate_features(c).features.column(0);
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= col.size();
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    var /= col.size() - 1;
    // Standard error of the mean is 1/sqrt(20000) ~ 0.007.
    EXPECT_NEAR(mean, 0.0, 0.03);
    EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(datagen, deterministic_given_seed) {
    auto c = headline_config(7);
    c.n_features = 60;
    const auto a = labelled(c);
    const auto b = labelled(c);
    ASSERT_EQ(a.features, b.features);
    ASSERT_EQ(a.labels, b.labels);
    ASSERT_EQ(a.medians_full, b.medians_full);
    c.seed = 8;
    ASSERT_FALSE(generate_features(c).features == a.features);
}

TEST(datagen, rejects_invalid_configs) {
    auto c = headline_config(0);
    c.n_redundant = 490;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = headline_config(0);
    c.n_informative = 4;
    c.clusters_per_class = 16;  // 32 vertices > 2^4
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = headline_config(0);
    c.flip_y = 1.5;
    try {
        c.validate();
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("flip_y"), std::string::npos);
    }
}

TEST(datagen, vertices_are_distinct_and_exhaustive_when_tight) {
    // n=5 with 16 clusters per class uses every vertex; every sign pattern of the
    // cluster centres must therefore be reachable. With class_sep large the sign
    // of each informative value reveals the vertex.
    GeneratorConfig c;
    c.n_samples = 4000;
    c.n_features = 5;
    c.n_informative = 5;
    c.n_redundant = 0;
    c.clusters_per_class = 16;
    c.class_sep = 50.0;
    c.seed = 11;
    const auto ds = generate_features(c);
    std::set<unsigned> patterns;
    for (std::size_t r = 0; r < ds.n_samples(); ++r) {
        unsigned p = 0;
        for (std::size_t k = 0; k < 5; ++k) p |= (ds.features(r, k) > 0 ? 1u : 0u) << k;
        patterns.insert(p);
    }
    EXPECT_EQ(patterns.size(), 32u);
}

TEST(datagen, parity_label_examples) {
    const std::vector<double> thr(3, 0.5);
    EXPECT_EQ(parity_label(std::vector<double>{1, 0, 1}, thr), 0);
    EXPECT_EQ(parity_label(std::vector<double>(11, 1.0), std::vector<double>(11, 0.5)), 1);
    // Strictness: a value equal to its threshold is a 0 bit.
    EXPECT_EQ(parity_label(std::vector<double>{0.5, 1, 0}, thr), 1);
}

TEST(datagen, median_convention) {
    EXPECT_DOUBLE_EQ(median({1, 2, 3, 4}), 2.5);
    EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
    EXPECT_THROW(median({}), std::invalid_argument);

    // Column [1,2,3,4] -> median 2.5 -> bits [0,0,1,1].
    Dataset ds;
    ds.features = Matrix(4, 1);
    for (int i = 0; i < 4; ++i) ds.features(i, 0) = i + 1;
    ds.informative_idx = {0};
    ds = assign_parity_labels(ds);
    EXPECT_DOUBLE_EQ(ds.medians_full[0], 2.5);
    EXPECT_EQ(ds.labels, (std::vector<int>{0, 0, 1, 1}));
}

TEST(datagen, parity_labels_nearly_balanced_without_noise) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
        const auto ds = labelled(headline_config(seed));
        const double frac = std::count(ds.labels.begin(), ds.labels.end(), 1) / 800.0;
        EXPECT_LE(std::abs(frac - 0.5), 0.1) << "seed " << seed;
    }
}

TEST(datagen, no_single_informative_column_predicts_parity) {
    for (uint64_t seed = 0; seed < 3; ++seed) {
        const auto ds = labelled(headline_config(seed));
        for (std::size_t k = 0; k < 11; ++k) {
            double sb = 0, sy = 0, sbb = 0, syy = 0, sby = 0;
            for (std::size_t r = 0; r < 800; ++r) {
                const double b = ds.features(r, k) > ds.medians_full[k] ? 1.0 : 0.0;
                const double y = ds.labels[r];
                sb += b; sy += y; sbb += b * b; syy += y * y; sby += b * y;
            }
            const double n = 800.0;
            const double cov = sby / n - sb * sy / (n * n);
            const double corr = cov / std::sqrt((sbb / n - sb * sb / (n * n)) * (syy / n - sy * sy / (n * n)));
            EXPECT_LE(std::abs(corr), 0.15) << "seed " << seed << " column " << k;
        }
    }
}

TEST(datagen, redundant_columns_lie_in_informative_span) {
    auto c = headline_config(2);
    c.n_features = 40;
    const auto ds = generate_features(c);
    Eigen::MatrixXd inf(800, 11);
    Eigen::MatrixXd red(800, 20);
    for (int r = 0; r < 800; ++r) {
        for (int k = 0; k < 11; ++k) inf(r, k) = ds.features(r, k);
        for (int k = 0; k < 20; ++k) red(r, k) = ds.features(r, 11 + k);
    }
    const Eigen::MatrixXd coef = inf.colPivHouseholderQr().solve(red);
    const double residual = (inf * coef - red).cwiseAbs().maxCoeff();
    EXPECT_LE(residual, 1e-9);
}

TEST(datagen, label_noise_extremes) {
    auto c = headline_config(1);
    c.n_features = 20;
    c.n_redundant = 0;
    const auto clean = labelled(c);
    EXPECT_EQ(apply_label_noise(clean, 0.0, 99).labels, clean.labels);
    const auto flipped = apply_label_noise(clean, 1.0, 99);
    for (std::size_t i = 0; i < clean.labels.size(); ++i) {
        ASSERT_EQ(flipped.labels[i], 1 - clean.labels[i]);
    }
    EXPECT_THROW(apply_label_noise(clean, -0.1, 0), std::invalid_argument);
    EXPECT_THROW(apply_label_noise(clean, 1.1, 0), std::invalid_argument);
}

TEST(datagen, label_noise_rate_concentrates) {
    // Binomial(800, 0.22): mean 176, sd sqrt(800 * 0.22 * 0.78) = 11.72.
    const double mean = 800 * 0.22;
    const double sd = std::sqrt(800 * 0.22 * 0.78);
    auto c = headline_config(4);
    c.n_features = 20;
    c.n_redundant = 0;
    const auto clean = labelled(c);
    for (uint64_t seed : {0ull, 1ull, 2ull}) {
        const auto noisy = apply_label_noise(clean, 0.22, seed);
        int flips = 0;
        for (std::size_t i = 0; i < 800; ++i) flips += noisy.labels[i] != clean.labels[i];
        EXPECT_GE(flips, mean - 4 * sd);
        EXPECT_LE(flips, mean + 4 * sd);
        EXPECT_GE(flips, 140);
        EXPECT_LE(flips, 212);
    }
}

TEST(datagen, split_headline_sizes) {
    auto c = headline_config(0);
    c.n_features = 20;
    c.n_redundant = 0;
    const auto ds = apply_label_noise(labelled(c), 0.22, 5);
    const auto split = stratified_split(ds, 0.3, 17);
    EXPECT_EQ(split.train_idx.size(), 560u);
    EXPECT_EQ(split.test_idx.size(), 240u);
    const auto again = stratified_split(ds, 0.3, 17);
    EXPECT_EQ(split.train_idx, again.train_idx);
    EXPECT_EQ(split.test_idx, again.test_idx);
}

TEST(datagen, split_exact_small_case) {
    Dataset ds;
    ds.features = Matrix(10, 1);
    ds.labels = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    const auto split = stratified_split(ds, 0.2, 3);
    ASSERT_EQ(split.test_idx.size(), 2u);
    EXPECT_NE(ds.labels[split.test_idx[0]], ds.labels[split.test_idx[1]]);

    ds.labels = {0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
    EXPECT_THROW(stratified_split(ds, 0.2, 3), std::invalid_argument);
}

TEST(datagen, split_properties_over_random_instances) {
    Rng gen(12345);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + gen.below(400);
        const double tf = 0.05 + 0.9 * gen.uniform();
        Dataset ds;
        ds.features = Matrix(n, 1);
        ds.labels.resize(n);
        const double p = 0.2 + 0.6 * gen.uniform();
        for (auto &y : ds.labels) y = gen.uniform() < p ? 1 : 0;
        ds.labels[0] = 0; ds.labels[1] = 0; ds.labels[2] = 1; ds.labels[3] = 1;
        const auto split = stratified_split(ds, tf, gen.next());

        std::vector<int> seen(n, 0);
        for (auto i : split.train_idx) seen[i]++;
        for (auto i : split.test_idx) seen[i]++;
        ASSERT_TRUE(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; })) << "trial " << trial;

        const double global = std::count(ds.labels.begin(), ds.labels.end(), 1) / static_cast<double>(n);
        for (const auto *part : {&split.train_idx, &split.test_idx}) {
            double pos = 0;
            for (auto i : *part) pos += ds.labels[i];
            EXPECT_LE(std::abs(pos - global * part->size()), 1.0 + 1e-9) << "trial " << trial;
        }
    }
}

TEST(dataset_io, csv_round_trip_is_exact) {
    auto c = headline_config(9);
    c.n_samples = 50;
    c.n_features = 40;
    const auto ds = apply_label_noise(labelled(c), 0.2, 1);
    const auto dir = std::filesystem::temp_directory_path() / "qkp_dataset_io_test";
    std::filesystem::create_directories(dir);
    write_dataset(ds, dir / "data");
    const auto back = read_dataset(dir / "data");
    EXPECT_EQ(back.features, ds.features);
    EXPECT_EQ(back.labels, ds.labels);
    EXPECT_EQ(back.medians_full, ds.medians_full);
    EXPECT_EQ(back.informative_idx, ds.informative_idx);
    EXPECT_EQ(back.config, ds.config);
    std::filesystem::remove_all(dir);
}
