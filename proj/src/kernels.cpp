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

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

namespace qkp {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += a[k] * b[k];
    }
    return acc;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return acc;
}

void require_finite(const Matrix &x, const char *what) {
    for (double v : x.data()) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + " contains a non-finite value");
        }
    }
}

std::vector<std::size_t> iota_ids(std::size_t n) {
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    return ids;
}

// Runs body(r) for every row r, rows interleaved across `threads` workers.
template <typename Body>
void for_each_row(std::size_t rows, std::size_t threads, Body &&body) {
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(rows, 1));
    if (threads == 1) {
        for (std::size_t r = 0; r < rows; ++r) {
            body(r);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t r = t; r < rows; r += threads) {
                        body(r);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

// Evaluates the classical kernels; quantum entries go through prepared states.
class Evaluator {
   public:
    Evaluator(const KernelSpec &spec, const Matrix &a, const Matrix &b, const GramOptions &options)
        : spec_(spec), a_(a), b_(b) {
        spec_.validate();
        require_finite(a, "kernel input");
        require_finite(b, "kernel input");
        if (a.cols() != b.cols()) {
            throw std::invalid_argument("kernel inputs have different column counts");
        }
        if (spec_.kind == KernelKind::quantum_zz) {
            if (a.cols() != spec_.feature_map.n_qubits) {
                throw std::invalid_argument("quantum kernel expects " + std::to_string(spec_.feature_map.n_qubits) +
                                            " columns, got " + std::to_string(a.cols()));
            }
            cache_ = options.cache;
            if (cache_ == nullptr) {
                own_cache_ = std::make_unique<StateCache>(spec_.feature_map);
                cache_ = own_cache_.get();
            } else if (!(cache_->config() == spec_.feature_map)) {
                throw std::invalid_argument("state cache was built for a different feature map");
            }
            states_a_ = prepare(a, options.threads);
            states_b_ = (&a == &b) ? states_a_ : prepare(b, options.threads);
        }
        if (spec_.kind == KernelKind::poly && spec_.normalize) {
            self_a_ = self_poly(a);
            self_b_ = (&a == &b) ? self_a_ : self_poly(b);
        }
    }

    double operator()(std::size_t i, std::size_t j) const {
        const auto x = a_.row(i);
        const auto y = b_.row(j);
        switch (spec_.kind) {
            case KernelKind::linear:
                return dot(x, y);
            case KernelKind::rbf:
                return std::exp(-spec_.gamma * squared_distance(x, y));
            case KernelKind::poly: {
                const double raw = std::pow(dot(x, y) + spec_.offset, spec_.degree);
                if (!spec_.normalize) {
                    return raw;
                }
                const double denom = self_a_[i] * self_b_[j];
                return denom > 0.0 ? raw / std::sqrt(denom) : 0.0;
            }
            case KernelKind::quantum_zz:
                return fidelity(*states_a_[i], *states_b_[j]);
        }
        return 0.0;
    }

   private:
    std::vector<std::shared_ptr<const StateVector>> prepare(const Matrix &x, std::size_t threads) {
        std::vector<std::shared_ptr<const StateVector>> states(x.rows());
        for_each_row(x.rows(), threads, [&](std::size_t r) { states[r] = cache_->get_or_prepare(x.row(r)); });
        return states;
    }

    std::vector<double> self_poly(const Matrix &x) const {
        std::vector<double> out(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r) {
            out[r] = std::pow(dot(x.row(r), x.row(r)) + spec_.offset, spec_.degree);
        }
        return out;
    }

    KernelSpec spec_;
    const Matrix &a_;
    const Matrix &b_;
    StateCache *cache_ = nullptr;
    std::unique_ptr<StateCache> own_cache_;
    std::vector<std::shared_ptr<const StateVector>> states_a_;
    std::vector<std::shared_ptr<const StateVector>> states_b_;
    std::vector<double> self_a_;
    std::vector<double> self_b_;
};

}  // namespace

std::string_view to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::quantum_zz:
            return "quantum_zz";
        case KernelKind::rbf:
            return "rbf";
        case KernelKind::linear:
            return "linear";
        case KernelKind::poly:
            return "poly";
    }
    return "unknown";
}

KernelKind kernel_kind_from_string(std::string_view name) {
    for (auto kind : {KernelKind::quantum_zz, KernelKind::rbf, KernelKind::linear, KernelKind::poly}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown kernel kind '" + std::string(name) + "'");
}

KernelSpec KernelSpec::rbf(double gamma) {
    KernelSpec s;
    s.kind = KernelKind::rbf;
    s.gamma = gamma;
    return s;
}

KernelSpec KernelSpec::linear() {
    KernelSpec s;
    s.kind = KernelKind::linear;
    return s;
}

KernelSpec KernelSpec::poly(int degree, double offset, bool normalize) {
    KernelSpec s;
    s.kind = KernelKind::poly;
    s.degree = degree;
    s.offset = offset;
    s.normalize = normalize;
    return s;
}

KernelSpec KernelSpec::quantum(const FeatureMapConfig &feature_map) {
    KernelSpec s;
    s.kind = KernelKind::quantum_zz;
    s.feature_map = feature_map;
    return s;
}

void KernelSpec::validate() const {
    switch (kind) {
        case KernelKind::rbf:
            if (!(gamma > 0.0) || !std::isfinite(gamma)) {
                throw std::invalid_argument("rbf gamma must be positive");
            }
            break;
        case KernelKind::poly:
            if (degree < 1) {
                throw std::invalid_argument("poly degree must be at least 1");
            }
            if (!(offset >= 0.0) || !std::isfinite(offset)) {
                throw std::invalid_argument("poly offset must be nonnegative");
            }
            break;
        case KernelKind::quantum_zz:
            feature_map.validate();
            break;
        case KernelKind::linear:
            break;
    }
}

nlohmann::json kernel_spec_to_json(const KernelSpec &spec) {
    nlohmann::json j = {{"kind", to_string(spec.kind)}};
    switch (spec.kind) {
        case KernelKind::rbf:
            j["gamma"] = spec.gamma;
            break;
        case KernelKind::poly:
            j["degree"] = spec.degree;
            j["offset"] = spec.offset;
            j["normalize"] = spec.normalize;
            break;
        case KernelKind::quantum_zz:
            j["n_qubits"] = spec.feature_map.n_qubits;
            j["reps"] = spec.feature_map.reps;
            j["entanglement"] = "full";
            j["hadamard_layers"] = spec.feature_map.hadamard_layers;
            break;
        case KernelKind::linear:
            break;
    }
    return j;
}

KernelSpec kernel_spec_from_json(const nlohmann::json &j) {
    KernelSpec s;
    s.kind = kernel_kind_from_string(j.at("kind").get<std::string>());
    s.gamma = j.value("gamma", s.gamma);
    s.degree = j.value("degree", s.degree);
    s.offset = j.value("offset", s.offset);
    s.normalize = j.value("normalize", s.normalize);
    if (s.kind == KernelKind::quantum_zz) {
        s.feature_map.n_qubits = j.at("n_qubits").get<std::size_t>();
        s.feature_map.reps = j.at("reps").get<std::size_t>();
        s.feature_map.hadamard_layers = j.value("hadamard_layers", true);
    }
    return s;
}

GramMatrix gram(const Matrix &x, const KernelSpec &spec, const GramOptions &options) {
    const Evaluator eval(spec, x, x, options);
    const std::size_t n = x.rows();
    GramMatrix out{Matrix(n, n), iota_ids(n), iota_ids(n), spec};
    // Upper triangle only, mirrored afterwards.
    for_each_row(n, options.threads, [&](std::size_t i) {
        for (std::size_t j = i; j < n; ++j) {
            out.values(i, j) = eval(i, j);
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            out.values(i, j) = out.values(j, i);
        }
    }
    return out;
}

GramMatrix cross_gram(const Matrix &eval_rows, const Matrix &train_rows, const KernelSpec &spec,
                      const GramOptions &options) {
    const Evaluator eval(spec, eval_rows, train_rows, options);
    GramMatrix out{Matrix(eval_rows.rows(), train_rows.rows()), iota_ids(eval_rows.rows()),
                   iota_ids(train_rows.rows()), spec};
    for_each_row(eval_rows.rows(), options.threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < train_rows.rows(); ++j) {
            out.values(i, j) = eval(i, j);
        }
    });
    return out;
}

double kta(const Matrix &k, std::span<const int> labels) {
    const std::size_t n = k.rows();
    if (k.cols() != n) {
        throw std::invalid_argument("kta needs a square Gram matrix");
    }
    if (labels.size() != n) {
        throw std::invalid_argument("kta: label count does not match the Gram matrix");
    }
    const auto positives = std::count_if(labels.begin(), labels.end(), [](int y) { return y != 0; });
    if (positives == 0 || static_cast<std::size_t>(positives) == n) {
        throw std::invalid_argument("kta is degenerate for single-class labels");
    }
    double aligned = 0.0;
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double yi = labels[i] != 0 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = k(i, j);
            const double yj = labels[j] != 0 ? 1.0 : -1.0;
            aligned += v * yi * yj;
            frob += v * v;
        }
    }
    if (frob == 0.0) {
        return 0.0;
    }
    return aligned / (std::sqrt(frob) * static_cast<double>(n));
}

double min_eigenvalue(const Matrix &k) {
    if (k.rows() != k.cols()) {
        throw std::invalid_argument("min_eigenvalue needs a square matrix");
    }
    const auto n = static_cast<Eigen::Index>(k.rows());
    if (n == 0) {
        return 0.0;
    }
    Eigen::MatrixXd sym(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            sym(i, j) = 0.5 * (k(i, j) + k(j, i));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double asymmetry(const Matrix &k) {
    double worst = 0.0;
    for (std::size_t i = 0; i < k.rows(); ++i) {
        for (std::size_t j = i + 1; j < k.cols(); ++j) {
            worst = std::max(worst, std::abs(k(i, j) - k(j, i)));
        }
    }
    return worst;
}

}  // namespace qkp
