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

// Dense gate-by-gate construction of the feature-map state. Shares nothing with
// the phase-table/FWHT path in qsim.cpp beyond the input contract; it exists to
// check that path.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qkparity/qsim.h"

namespace qkp {

namespace {

constexpr std::size_t kOracleMaxQubits = 10;

using Dense = Eigen::MatrixXcd;

Dense kron(const Dense &a, const Dense &b) {
    Dense out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Places single-qubit operators on the register. Qubit k is bit k of the basis
// index, so qubit n-1 is the leftmost Kronecker factor.
Dense place(const std::vector<Dense> &per_qubit) {
    Dense out = Dense::Identity(1, 1);
    for (std::size_t k = per_qubit.size(); k-- > 0;) {
        out = kron(out, per_qubit[k]);
    }
    return out;
}

Dense single_qubit_op(std::size_t n, std::size_t target, const Dense &op) {
    std::vector<Dense> factors(n, Dense::Identity(2, 2));
    factors[target] = op;
    return place(factors);
}

Dense pauli_z() {
    Dense z = Dense::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return z;
}

// exp(i * angle * D) for a real diagonal generator D given as a dense matrix.
Dense exp_i_diagonal(const Dense &generator, double angle) {
    Dense out = Dense::Zero(generator.rows(), generator.cols());
    for (Eigen::Index d = 0; d < generator.rows(); ++d) {
        out(d, d) = std::polar(1.0, angle * generator(d, d).real());
    }
    return out;
}

}  // namespace

StateVector dense_reference_state(std::span<const double> x, const FeatureMapConfig &config) {
    if (config.n_qubits > kOracleMaxQubits) {
        throw SimulationLimitError("dense reference is limited to " + std::to_string(kOracleMaxQubits) +
                                   " qubits");
    }
    config.validate();
    if (x.size() != config.n_qubits) {
        throw std::invalid_argument("dense reference: input length mismatch");
    }
    const std::size_t n = config.n_qubits;
    const Eigen::Index dim = Eigen::Index{1} << n;

    Dense hadamard(2, 2);
    const double h = 1.0 / std::sqrt(2.0);
    hadamard << h, h, h, -h;

    Dense layer_h = Dense::Identity(dim, dim);
    for (std::size_t k = 0; k < n; ++k) {
        layer_h = single_qubit_op(n, k, hadamard) * layer_h;
    }

    std::vector<Dense> z_on(n);
    for (std::size_t k = 0; k < n; ++k) {
        z_on[k] = single_qubit_op(n, k, pauli_z());
    }

    // U_Z(x) * U_ZZ(x), each factor an explicit dense diagonal matrix.
    Dense layer_phase = Dense::Identity(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double coeff = (std::numbers::pi - x[i]) * (std::numbers::pi - x[j]);
            layer_phase = exp_i_diagonal(z_on[i] * z_on[j], coeff) * layer_phase;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        layer_phase = exp_i_diagonal(z_on[i], x[i]) * layer_phase;
    }

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
        if (config.hadamard_layers) {
            psi = layer_h * psi;
        }
        psi = layer_phase * psi;
    }
    return StateVector(std::vector<Amplitude>(psi.data(), psi.data() + psi.size()));
}

}  // namespace qkp
