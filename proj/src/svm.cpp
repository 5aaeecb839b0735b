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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qkp {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem(const Matrix &k, std::span<const int> y) {
    if (k.rows() != k.cols()) {
        throw std::invalid_argument("training Gram must be square");
    }
    if (y.size() != k.rows()) {
        throw std::invalid_argument("label count " + std::to_string(y.size()) + " does not match Gram size " +
                                    std::to_string(k.rows()));
    }
    bool pos = false;
    bool neg = false;
    for (int label : y) {
        if (label == 1) {
            pos = true;
        } else if (label == -1) {
            neg = true;
        } else {
            throw std::invalid_argument("SVM labels must be -1 or +1");
        }
    }
    if (!pos || !neg) {
        throw std::invalid_argument("SVM training needs both classes");
    }
}

// Solver state for one train() call.
class Smo {
   public:
    Smo(const Matrix &k, std::span<const int> y, double C) : k_(k), y_(y), C_(C), n_(y.size()) {
        alpha_.assign(n_, 0.0);
        grad_.assign(n_, -1.0);
    }

    std::size_t solve(const SmoOptions &options) {
        std::size_t iter = 0;
        while (true) {
            std::size_t i = 0;
            std::size_t j = 0;
            const double gap = select_pair(i, j);
            if (gap < options.tol || i == j) {
                return iter;
            }
            if (iter >= options.max_iterations) {
                throw NonConvergenceError(iter, gap);
            }
            update_pair(i, j);
            ++iter;
        }
    }

    double bias() const {
        double ub = kInf;
        double lb = -kInf;
        double sum_free = 0.0;
        std::size_t n_free = 0;
        for (std::size_t t = 0; t < n_; ++t) {
            const double yg = y_[t] * grad_[t];
            if (at_upper(t)) {
                if (y_[t] == -1) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else if (at_lower(t)) {
                if (y_[t] == +1) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else {
                ++n_free;
                sum_free += yg;
            }
        }
        const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
        return -rho;
    }

    const std::vector<double> &alpha() const { return alpha_; }

   private:
    bool at_upper(std::size_t t) const { return alpha_[t] >= C_; }
    bool at_lower(std::size_t t) const { return alpha_[t] <= 0.0; }
    bool in_up(std::size_t t) const { return y_[t] == +1 ? !at_upper(t) : !at_lower(t); }
    bool in_low(std::size_t t) const { return y_[t] == +1 ? !at_lower(t) : !at_upper(t); }

    // Returns the violating-pair gap m - M; i, j receive the working pair.
    double select_pair(std::size_t &i, std::size_t &j) const {
        double gmax = -kInf;
        std::size_t gmax_idx = n_;
        for (std::size_t t = 0; t < n_; ++t) {
            if (in_up(t)) {
                const double v = -y_[t] * grad_[t];
                if (v > gmax) {
                    gmax = v;
                    gmax_idx = t;
                }
            }
        }
        double gmax2 = -kInf;
        double best_obj = kInf;
        std::size_t best_j = n_;
        for (std::size_t t = 0; t < n_; ++t) {
            if (!in_low(t)) {
                continue;
            }
            const double v = y_[t] * grad_[t];
            gmax2 = std::max(gmax2, v);
            if (gmax_idx == n_) {
                continue;
            }
            const double grad_diff = gmax + v;
            if (grad_diff > 0.0) {
                double quad = k_(gmax_idx, gmax_idx) + k_(t, t) - 2.0 * k_(gmax_idx, t);
                if (quad <= 0.0) {
                    quad = kTau;
                }
                const double obj = -(grad_diff * grad_diff) / quad;
                if (obj < best_obj) {
                    best_obj = obj;
                    best_j = t;
                }
            }
        }
        if (gmax_idx == n_ || best_j == n_) {
            return gmax_idx == n_ || gmax2 == -kInf ? 0.0 : std::max(0.0, gmax + gmax2);
        }
        i = gmax_idx;
        j = best_j;
        return gmax + gmax2;
    }

    void update_pair(std::size_t i, std::size_t j) {
        const double old_ai = alpha_[i];
        const double old_aj = alpha_[j];
        double &ai = alpha_[i];
        double &aj = alpha_[j];
        double quad = k_(i, i) + k_(j, j) - 2.0 * k_(i, j);
        if (quad <= 0.0) {
            quad = kTau;
        }
        if (y_[i] != y_[j]) {
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > 0.0) {
                if (ai > C_) {
                    ai = C_;
                    aj = C_ - diff;
                }
            } else if (aj > C_) {
                aj = C_;
                ai = C_ + diff;
            }
        } else {
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C_) {
                if (ai > C_) {
                    ai = C_;
                    aj = sum - C_;
                }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > C_) {
                if (aj > C_) {
                    aj = C_;
                    ai = sum - C_;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }
        const double di = (ai - old_ai) * y_[i];
        const double dj = (aj - old_aj) * y_[j];
        const auto ki = k_.row(i);
        const auto kj = k_.row(j);
        for (std::size_t t = 0; t < n_; ++t) {
            grad_[t] += y_[t] * (ki[t] * di + kj[t] * dj);
        }
    }

    const Matrix &k_;
    std::span<const int> y_;
    double C_;
    std::size_t n_;
    std::vector<double> alpha_;
    std::vector<double> grad_;  // Q alpha - 1
};

}  // namespace

NonConvergenceError::NonConvergenceError(std::size_t iterations, double residual)
    : std::runtime_error("SMO did not converge after " + std::to_string(iterations) +
                         " pair updates (violating-pair gap " + std::to_string(residual) + ")"),
      iterations_(iterations),
      residual_(residual) {}

std::vector<int> to_signed_labels(std::span<const int> labels01) {
    std::vector<int> out(labels01.size());
    std::transform(labels01.begin(), labels01.end(), out.begin(), [](int y) { return y != 0 ? 1 : -1; });
    return out;
}

SvmModel train(const Matrix &k_train, std::span<const int> y, double C, const SmoOptions &options) {
    check_problem(k_train, y);
    if (!(C > 0.0) || !std::isfinite(C)) {
        throw std::invalid_argument("C must be positive");
    }
    Smo smo(k_train, y, C);
    SvmModel model;
    model.iterations = smo.solve(options);
    model.alpha = smo.alpha();
    model.bias = smo.bias();
    model.y_train.assign(y.begin(), y.end());
    model.C = C;
    for (std::size_t t = 0; t < model.alpha.size(); ++t) {
        if (model.alpha[t] > options.support_epsilon) {
            model.support_idx.push_back(t);
        }
    }
    return model;
}

Prediction predict(const SvmModel &model, const Matrix &k_eval) {
    if (k_eval.cols() != model.alpha.size()) {
        throw std::invalid_argument("kernel rows have " + std::to_string(k_eval.cols()) + " columns, model has " +
                                    std::to_string(model.alpha.size()) + " training samples");
    }
    Prediction out;
    out.labels.resize(k_eval.rows());
    out.decision.resize(k_eval.rows());
    for (std::size_t r = 0; r < k_eval.rows(); ++r) {
        const auto row = k_eval.row(r);
        double f = model.bias;
        for (std::size_t s : model.support_idx) {
            f += model.alpha[s] * model.y_train[s] * row[s];
        }
        out.decision[r] = f;
        out.labels[r] = f >= 0.0 ? 1 : -1;
    }
    return out;
}

double kkt_residual(const SvmModel &model, const Matrix &k_train, std::span<const int> y) {
    const std::size_t n = model.alpha.size();
    if (k_train.rows() != n || k_train.cols() != n || y.size() != n) {
        throw std::invalid_argument("kkt_residual: shape mismatch");
    }
    double worst = 0.0;
    double balance = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = model.alpha[i];
        balance += a * y[i];
        worst = std::max({worst, -a, a - model.C});
        double f = model.bias;
        const auto row = k_train.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            f += model.alpha[j] * y[j] * row[j];
        }
        const double margin = y[i] * f - 1.0;
        if (a <= 0.0) {
            worst = std::max(worst, -margin);
        } else if (a >= model.C) {
            worst = std::max(worst, margin);
        } else {
            worst = std::max(worst, std::abs(margin));
        }
    }
    return std::max(worst, std::abs(balance));
}

double dual_objective(std::span<const double> alpha, const Matrix &k, std::span<const int> y) {
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        linear += alpha[i];
        const auto row = k.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            acc += alpha[j] * y[j] * row[j];
        }
        quad += alpha[i] * y[i] * acc;
    }
    return linear - 0.5 * quad;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size() || truth.empty()) {
        throw std::invalid_argument("accuracy: size mismatch");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        hits += predicted[i] == truth[i] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

nlohmann::json model_to_json(const SvmModel &model) {
    return {
        {"C", model.C},
        {"bias", model.bias},
        {"alpha", model.alpha},
        {"y_train", model.y_train},
        {"support_idx", model.support_idx},
        {"iterations", model.iterations},
    };
}

}  // namespace qkp
