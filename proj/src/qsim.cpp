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

#include "qkparity/qsim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

namespace qkp {

namespace {

constexpr double kFidelitySlack = 1e-9;

std::string memory_estimate(std::size_t n_qubits) {
    const double bytes = std::ldexp(static_cast<double>(sizeof(Amplitude)), static_cast<int>(n_qubits));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g MiB", bytes / (1024.0 * 1024.0));
    return buf;
}

void check_input(std::span<const double> x, const FeatureMapConfig &config) {
    config.validate();
    if (x.size() != config.n_qubits) {
        throw std::invalid_argument("feature map expects " + std::to_string(config.n_qubits) +
                                    " inputs, got " + std::to_string(x.size()));
    }
}

}  // namespace

void FeatureMapConfig::validate() const {
    if (n_qubits == 0) {
        throw std::invalid_argument("feature map needs at least one qubit");
    }
    if (reps == 0) {
        throw std::invalid_argument("feature map needs at least one repetition");
    }
    if (n_qubits > max_qubits) {
        throw SimulationLimitError("feature map on " + std::to_string(n_qubits) +
                                   " qubits exceeds the simulation cap of " + std::to_string(max_qubits) +
                                   " (statevector would need " + memory_estimate(n_qubits) + ")");
    }
}

StateVector::StateVector(std::vector<Amplitude> amplitudes) : amps_(std::move(amplitudes)) {
    const std::size_t n = amps_.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("statevector length must be a power of two");
    }
    while ((std::size_t{1} << num_qubits_) < n) {
        ++num_qubits_;
    }
}

StateVector StateVector::zero_state(std::size_t n_qubits) {
    std::vector<Amplitude> amps(std::size_t{1} << n_qubits);
    amps[0] = 1.0;
    return StateVector(std::move(amps));
}

double StateVector::norm_squared() const {
    double acc = 0.0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

std::vector<QubitPair> entangling_pairs(const FeatureMapConfig &config) {
    std::vector<QubitPair> pairs;
    for (std::size_t i = 0; i < config.n_qubits; ++i) {
        for (std::size_t j = i + 1; j < config.n_qubits; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    return pairs;
}

PhaseTable build_phase_table(std::span<const double> x, const FeatureMapConfig &config) {
    return build_phase_table(x, config, entangling_pairs(config));
}

PhaseTable build_phase_table(std::span<const double> x, const FeatureMapConfig &config,
                             std::span<const QubitPair> pairs) {
    check_input(x, config);
    const std::size_t n = config.n_qubits;

    // weight[j * n + i] holds the ZZ coefficient for the pair (i, j), i < j.
    std::vector<double> weight(n * n, 0.0);
    for (auto [a, b] : pairs) {
        if (a == b || a >= n || b >= n) {
            throw std::invalid_argument("invalid qubit pair");
        }
        const std::size_t i = std::min(a, b);
        const std::size_t j = std::max(a, b);
        weight[j * n + i] += (std::numbers::pi - x[i]) * (std::numbers::pi - x[j]);
    }

    // Qubit by qubit doubling: bit k splits every existing entry into s_k = +1 / -1
    // halves, shifted by the part of the phase that involves qubit k and lower qubits.
    PhaseTable table;
    table.phases.assign(std::size_t{1} << n, 0.0);
    auto &ph = table.phases;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t half = std::size_t{1} << k;
        const double *w = weight.data() + k * n;
        for (std::size_t z = 0; z < half; ++z) {
            double coupling = x[k];
            for (std::size_t i = 0; i < k; ++i) {
                coupling += ((z >> i) & 1U) ? -w[i] : w[i];
            }
            const double base = ph[z];
            ph[z] = base + coupling;
            ph[z | half] = base - coupling;
        }
    }
    return table;
}

void apply_hadamard_layer(std::span<Amplitude> amps) {
    const std::size_t size = amps.size();
    for (std::size_t half = 1; half < size; half <<= 1) {
        for (std::size_t block = 0; block < size; block += 2 * half) {
            Amplitude *lo = amps.data() + block;
            Amplitude *hi = lo + half;
            for (std::size_t k = 0; k < half; ++k) {
                const Amplitude a = lo[k];
                const Amplitude b = hi[k];
                lo[k] = a + b;
                hi[k] = a - b;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(size));
    for (auto &a : amps) {
        a *= scale;
    }
}

StateVector prepare_state(std::span<const double> x, const FeatureMapConfig &config) {
    const PhaseTable table = build_phase_table(x, config);
    std::vector<Amplitude> rotation(table.phases.size());
    for (std::size_t z = 0; z < rotation.size(); ++z) {
        rotation[z] = std::polar(1.0, table.phases[z]);
    }
    StateVector state = StateVector::zero_state(config.n_qubits);
    auto amps = state.mutable_amplitudes();
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
        if (config.hadamard_layers) {
            apply_hadamard_layer(amps);
        }
        for (std::size_t z = 0; z < amps.size(); ++z) {
            amps[z] *= rotation[z];
        }
    }
    return state;
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("fidelity of states with different dimensions");
    }
    const auto pa = a.amplitudes();
    const auto pb = b.amplitudes();
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < pa.size(); ++k) {
        const double ar = pa[k].real();
        const double ai = pa[k].imag();
        const double br = pb[k].real();
        const double bi = pb[k].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    const double f = re * re + im * im;
    if (f > 1.0 + kFidelitySlack || !std::isfinite(f)) {
        throw SimulatorError("fidelity " + std::to_string(f) + " outside [0, 1]");
    }
    return f > 1.0 ? 1.0 : f;
}

void dump_state_csv(const StateVector &state, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << "index,real,imag\n";
    char buf[96];
    const auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", k, amps[k].real(), amps[k].imag());
        out << buf;
    }
}

StateCache::StateCache(FeatureMapConfig config) : config_(config) { config_.validate(); }

std::shared_ptr<const StateVector> StateCache::get_or_prepare(std::span<const double> x) {
    std::string key(reinterpret_cast<const char *>(x.data()), x.size_bytes());
    {
        std::shared_lock lock(mutex_);
        if (auto it = states_.find(key); it != states_.end()) {
            return it->second;
        }
    }
    auto state = std::make_shared<const StateVector>(prepare_state(x, config_));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = states_.try_emplace(std::move(key), std::move(state));
    if (inserted) {
        ++misses_;
    }
    return it->second;
}

std::size_t StateCache::size() const {
    std::shared_lock lock(mutex_);
    return states_.size();
}

std::size_t StateCache::misses() const {
    std::shared_lock lock(mutex_);
    return misses_;
}

}  // namespace qkp
