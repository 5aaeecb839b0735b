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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "qkparity/rng.h"

namespace qkp {

namespace {

constexpr std::size_t kMaxInformative = 63;

[[noreturn]] void reject(const std::string &what) {
    throw std::invalid_argument("invalid generator config: " + what);
}

// Floyd's algorithm: `count` distinct values from [0, 2^bits), in draw order.
std::vector<uint64_t> sample_vertices(Rng &rng, std::size_t bits, std::size_t count) {
    const uint64_t universe = uint64_t{1} << bits;
    std::set<uint64_t> seen;
    std::vector<uint64_t> out;
    out.reserve(count);
    for (uint64_t j = universe - count; j < universe; ++j) {
        const uint64_t t = rng.below(j + 1);
        const uint64_t pick = seen.contains(t) ? j : t;
        seen.insert(pick);
        out.push_back(pick);
    }
    return out;
}

}  // namespace

void GeneratorConfig::validate() const {
    if (n_samples == 0) {
        reject("n_samples must be positive");
    }
    if (n_informative == 0) {
        reject("n_informative must be positive");
    }
    if (n_informative > kMaxInformative) {
        reject("n_informative must be at most " + std::to_string(kMaxInformative));
    }
    if (n_informative + n_redundant > n_features) {
        reject("n_informative + n_redundant (" + std::to_string(n_informative + n_redundant) +
               ") exceeds n_features (" + std::to_string(n_features) + ")");
    }
    if (clusters_per_class == 0) {
        reject("clusters_per_class must be positive");
    }
    // 2 * clusters_per_class <= 2^n_informative
    if (n_informative < 63 && 2 * clusters_per_class > (uint64_t{1} << n_informative)) {
        reject("2 * clusters_per_class (" + std::to_string(2 * clusters_per_class) +
               ") exceeds the 2^n_informative hypercube vertices");
    }
    if (!(class_sep >= 0.0) || !std::isfinite(class_sep)) {
        reject("class_sep must be a finite nonnegative number");
    }
    if (!(flip_y >= 0.0 && flip_y <= 1.0)) {
        reject("flip_y must be in [0, 1]");
    }
}

Dataset generate_features(const GeneratorConfig &config) {
    config.validate();
    const std::size_t n_inf = config.n_informative;
    const std::size_t n_red = config.n_redundant;
    const std::size_t n_probe = config.n_features - n_inf - n_red;
    const std::size_t n_vertices = 2 * config.clusters_per_class;

    Rng rng(substream_seed(config.seed, "features"));
    const auto vertices = sample_vertices(rng, n_inf, n_vertices);

    std::vector<double> mixing(n_inf * n_red);
    for (auto &m : mixing) {
        m = rng.uniform(-1.0, 1.0);
    }

    Dataset ds;
    ds.config = config;
    ds.seed = config.seed;
    ds.features = Matrix(config.n_samples, config.n_features);
    ds.informative_idx.resize(n_inf);
    std::iota(ds.informative_idx.begin(), ds.informative_idx.end(), std::size_t{0});

    for (std::size_t s = 0; s < config.n_samples; ++s) {
        auto row = ds.features.row(s);
        const uint64_t vertex = vertices[rng.below(n_vertices)];
        for (std::size_t k = 0; k < n_inf; ++k) {
            const double centre = ((vertex >> k) & 1U) ? config.class_sep : -config.class_sep;
            row[k] = centre + rng.normal();
        }
        for (std::size_t r = 0; r < n_red; ++r) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n_inf; ++k) {
                acc += row[k] * mixing[k * n_red + r];
            }
            row[n_inf + r] = acc;
        }
        for (std::size_t p = 0; p < n_probe; ++p) {
            row[n_inf + n_red + p] = rng.normal();
        }
    }
    return ds;
}

int parity_label(std::span<const double> row, std::span<const double> thresholds) {
    int parity = 0;
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        parity ^= row[k] > thresholds[k] ? 1 : 0;
    }
    return parity;
}

Dataset assign_parity_labels(Dataset dataset) {
    const std::size_t n = dataset.n_samples();
    const auto &idx = dataset.informative_idx;
    dataset.medians_full.resize(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        dataset.medians_full[k] = median(dataset.features.column(idx[k]));
    }
    dataset.labels.assign(n, 0);
    std::vector<double> informative(idx.size());
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t k = 0; k < idx.size(); ++k) {
            informative[k] = dataset.features(s, idx[k]);
        }
        dataset.labels[s] = parity_label(informative, dataset.medians_full);
    }
    return dataset;
}

Dataset apply_label_noise(Dataset dataset, double flip_y, uint64_t noise_seed) {
    if (!(flip_y >= 0.0 && flip_y <= 1.0)) {
        throw std::invalid_argument("flip_y must be in [0, 1], got " + std::to_string(flip_y));
    }
    Rng rng(substream_seed(noise_seed, "noise"));
    for (auto &label : dataset.labels) {
        if (rng.uniform() < flip_y) {
            label ^= 1;
        }
    }
    return dataset;
}

SplitIndices stratified_split(const Dataset &dataset, double test_fraction, uint64_t split_seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("test_fraction must be in (0, 1)");
    }
    const std::size_t n = dataset.labels.size();
    if (n != dataset.n_samples()) {
        throw std::invalid_argument("stratified_split: labels are not assigned");
    }
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < n; ++i) {
        by_class[dataset.labels[i] != 0 ? 1 : 0].push_back(i);
    }
    for (int c = 0; c < 2; ++c) {
        if (by_class[c].size() < 2) {
            throw std::invalid_argument("cannot stratify: class " + std::to_string(c) + " has " +
                                        std::to_string(by_class[c].size()) + " sample(s)");
        }
    }

    // Largest-remainder allocation of the test budget; ties go to class 0.
    const auto total_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    std::size_t quota[2];
    double remainder[2];
    for (int c = 0; c < 2; ++c) {
        const double exact = test_fraction * static_cast<double>(by_class[c].size());
        quota[c] = static_cast<std::size_t>(std::floor(exact));
        remainder[c] = exact - std::floor(exact);
    }
    std::size_t assigned = quota[0] + quota[1];
    const int first = remainder[1] > remainder[0] ? 1 : 0;
    for (int k = 0; assigned < total_test && k < 2; ++k) {
        ++quota[(first + k) % 2];
        ++assigned;
    }
    for (int c = 0; c < 2; ++c) {
        quota[c] = std::clamp<std::size_t>(quota[c], 1, by_class[c].size() - 1);
    }

    Rng rng(substream_seed(split_seed, "split"));
    SplitIndices out;
    for (int c = 0; c < 2; ++c) {
        auto members = by_class[c];
        rng.shuffle(std::span<std::size_t>(members));
        out.test_idx.insert(out.test_idx.end(), members.begin(), members.begin() + quota[c]);
        out.train_idx.insert(out.train_idx.end(), members.begin() + quota[c], members.end());
    }
    std::sort(out.train_idx.begin(), out.train_idx.end());
    std::sort(out.test_idx.begin(), out.test_idx.end());
    return out;
}

}  // namespace qkp
