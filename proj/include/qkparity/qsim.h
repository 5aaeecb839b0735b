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
 * Exact statevector simulation of the ZZ feature map.
 *
 * Qubit k is bit k of the basis-state index (little-endian). For basis state z
 * with Z eigenvalues s_k = +1 (z_k = 0) or -1 (z_k = 1) the map applies the
 * diagonal phase
 *
 *     phase(z) = sum_i x_i s_i + sum_{i<j} (pi - x_i)(pi - x_j) s_i s_j
 *
 * once per repetition, each preceded by a Hadamard layer when enabled.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qkp {

using Amplitude = std::complex<double>;

enum class Entanglement { full };

struct FeatureMapConfig {
    std::size_t n_qubits = 1;
    std::size_t reps = 3;
    Entanglement entanglement = Entanglement::full;
    bool hadamard_layers = true;
    /// Largest n_qubits prepare_state accepts.
    std::size_t max_qubits = 24;

    void validate() const;
    bool operator==(const FeatureMapConfig &) const = default;
};

/// Raised when a state would exceed the configured simulation cap.
class SimulationLimitError : public std::length_error {
   public:
    using std::length_error::length_error;
};

/// Raised when a computed quantity violates a physical bound beyond round-off.
class SimulatorError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

class StateVector {
   public:
    StateVector() = default;
    explicit StateVector(std::vector<Amplitude> amplitudes);

    /// |0...0> on n qubits.
    static StateVector zero_state(std::size_t n_qubits);

    std::span<const Amplitude> amplitudes() const { return amps_; }
    std::span<Amplitude> mutable_amplitudes() { return amps_; }
    std::size_t size() const { return amps_.size(); }
    std::size_t num_qubits() const { return num_qubits_; }
    double norm_squared() const;

   private:
    std::vector<Amplitude> amps_;
    std::size_t num_qubits_ = 0;
};

struct PhaseTable {
    std::vector<double> phases;
};

using QubitPair = std::pair<std::size_t, std::size_t>;

/// The i<j pairs coupled by the entanglement pattern, lexicographic order.
std::vector<QubitPair> entangling_pairs(const FeatureMapConfig &config);

PhaseTable build_phase_table(std::span<const double> x, const FeatureMapConfig &config);
/// Same, with an explicit pair enumeration.
PhaseTable build_phase_table(std::span<const double> x, const FeatureMapConfig &config,
                             std::span<const QubitPair> pairs);

/// Normalized fast Walsh-Hadamard transform, i.e. H on every qubit, in place.
void apply_hadamard_layer(std::span<Amplitude> amps);

StateVector prepare_state(std::span<const double> x, const FeatureMapConfig &config);

/// |<a|b>|^2, clamped to [0, 1] when within 1e-9 of the bounds; SimulatorError beyond.
double fidelity(const StateVector &a, const StateVector &b);

/// Gate-by-gate dense-matrix construction of the same state; test oracle, n <= 10.
StateVector dense_reference_state(std::span<const double> x, const FeatureMapConfig &config);

/// Writes "index,real,imag" rows.
void dump_state_csv(const StateVector &state, const std::filesystem::path &path);

/// Memo of prepared states keyed by the exact bytes of the input vector.
///
/// Safe for concurrent get_or_prepare. Two racing misses on one key both
/// prepare the state but only the first insertion is kept, so every caller
/// receives the same object.
class StateCache {
   public:
    explicit StateCache(FeatureMapConfig config);

    std::shared_ptr<const StateVector> get_or_prepare(std::span<const double> x);

    const FeatureMapConfig &config() const { return config_; }
    std::size_t size() const;
    std::size_t misses() const;

   private:
    FeatureMapConfig config_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<const StateVector>> states_;
    std::size_t misses_ = 0;
};

}  // namespace qkp
