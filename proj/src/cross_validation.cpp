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

#include <algorithm>
#include <cmath>
#include <string>

#include "qkparity/rng.h"
#include "qkparity/svm.h"

namespace qkp {

namespace {

struct FoldData {
    Matrix k_fit;
    Matrix k_held;
    std::vector<int> y_fit;
    std::vector<int> y_held;
};

std::vector<FoldData> split_folds(const Matrix &k, std::span<const int> y, const CvPlan &plan) {
    std::vector<FoldData> folds(plan.folds);
    for (std::size_t f = 0; f < plan.folds; ++f) {
        std::vector<std::size_t> fit;
        std::vector<std::size_t> held;
        for (std::size_t i = 0; i < y.size(); ++i) {
            (plan.fold_of[i] == f ? held : fit).push_back(i);
        }
        auto &fd = folds[f];
        for (std::size_t i : fit) {
            fd.y_fit.push_back(y[i]);
        }
        for (std::size_t i : held) {
            fd.y_held.push_back(y[i]);
        }
        auto single_class = [](const std::vector<int> &labels) {
            return labels.empty() || std::all_of(labels.begin(), labels.end(), [&](int v) { return v == labels[0]; });
        };
        if (single_class(fd.y_fit) || single_class(fd.y_held)) {
            throw std::invalid_argument("cross-validation fold " + std::to_string(f) + " contains a single class");
        }
        fd.k_fit = k.take(fit, fit);
        fd.k_held = k.take(held, fit);
    }
    return folds;
}

// True when `cand` should replace `best` (grid order breaks remaining ties).
bool preferred(const GridCell &cand, const GridCell &best) {
    if (cand.mean_accuracy != best.mean_accuracy) {
        return cand.mean_accuracy > best.mean_accuracy;
    }
    if (cand.C != best.C) {
        return cand.C < best.C;
    }
    const auto secondary = [](const GridCell &c) { return c.gamma ? *c.gamma : c.offset.value_or(0.0); };
    return secondary(cand) < secondary(best);
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

CvPlan make_cv_plan(std::span<const int> labels, std::size_t folds, uint64_t fold_seed) {
    if (folds < 2) {
        throw std::invalid_argument("cross-validation needs at least 2 folds");
    }
    if (labels.size() < folds) {
        throw std::invalid_argument("fewer samples than folds");
    }
    std::vector<std::size_t> members[2];
    for (std::size_t i = 0; i < labels.size(); ++i) {
        members[labels[i] > 0 ? 1 : 0].push_back(i);
    }
    CvPlan plan;
    plan.folds = folds;
    plan.fold_seed = fold_seed;
    plan.fold_of.assign(labels.size(), 0);
    Rng rng(substream_seed(fold_seed, "folds"));
    std::size_t next = 0;
    for (auto &cls : members) {
        rng.shuffle(std::span<std::size_t>(cls));
        for (std::size_t i : cls) {
            plan.fold_of[i] = next;
            next = (next + 1) % folds;
        }
    }
    return plan;
}

void GridSpec::validate() const {
    if (C_values.empty()) {
        throw std::invalid_argument("grid needs at least one C value");
    }
    if (!gamma_values.empty() && !offset_values.empty()) {
        throw std::invalid_argument("grid may carry gamma or offset values, not both");
    }
    for (double c : C_values) {
        if (!positive_finite(c)) {
            throw std::invalid_argument("grid C values must be positive");
        }
    }
    for (double g : gamma_values) {
        if (!positive_finite(g)) {
            throw std::invalid_argument("grid gamma values must be positive");
        }
    }
    for (double o : offset_values) {
        if (!(o >= 0.0) || !std::isfinite(o)) {
            throw std::invalid_argument("grid offset values must be nonnegative");
        }
    }
}

CvResult cross_validate(const GramSource &source, std::span<const int> y, const GridSpec &grid, const CvPlan &plan,
                        const SmoOptions &options) {
    grid.validate();
    if (plan.fold_of.size() != y.size()) {
        throw std::invalid_argument("CV plan does not cover the training set");
    }
    std::vector<std::optional<double>> secondary;
    for (double g : grid.gamma_values) {
        secondary.emplace_back(g);
    }
    for (double o : grid.offset_values) {
        secondary.emplace_back(o);
    }
    if (secondary.empty()) {
        secondary.emplace_back(std::nullopt);
    }

    CvResult result;
    for (const auto &param : secondary) {
        const auto folds = split_folds(source(param), y, plan);
        for (double C : grid.C_values) {
            GridCell cell;
            cell.C = C;
            if (param && !grid.gamma_values.empty()) {
                cell.gamma = param;
            } else if (param) {
                cell.offset = param;
            }
            double total = 0.0;
            for (const auto &fd : folds) {
                const auto model = train(fd.k_fit, fd.y_fit, C, options);
                total += accuracy(predict(model, fd.k_held).labels, fd.y_held);
            }
            cell.mean_accuracy = total / static_cast<double>(folds.size());
            if (result.cells.empty() || preferred(cell, result.best)) {
                result.best = cell;
            }
            result.cells.push_back(cell);
        }
    }
    return result;
}

CvResult cross_validate(const Matrix &k_train, std::span<const int> y, const GridSpec &grid, const CvPlan &plan,
                        const SmoOptions &options) {
    if (!grid.gamma_values.empty() || !grid.offset_values.empty()) {
        throw std::invalid_argument("fixed-kernel cross-validation takes a C-only grid");
    }
    return cross_validate([&](std::optional<double>) { return k_train; }, y, grid, plan, options);
}

}  // namespace qkp
