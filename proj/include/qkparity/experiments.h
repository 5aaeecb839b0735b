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
 * Experiment orchestration: one pipeline run per (n, noise, seed, method) cell,
 * sweeps over the cell grid with an on-disk journal, and mean/std aggregation.
 *
 * Every random draw in a cell is keyed by
 *
 *     cell_seed = mix(mix(mix(master_seed, n), bits(flip_y)), seed)
 *
 * and the stage substreams ("features", "noise", "split", "folds") derived from
 * it. All methods of a cell therefore see the same dataset and split, and no
 * result depends on which worker ran the cell or in which order.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkparity/datagen.h"
#include "qkparity/svm.h"

namespace qkp {

enum class Method { linear_svc, rbf_continuous, rbf_binary, poly_binary_d11, quantum_zz };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);
/// All methods in canonical (table) order.
std::span<const Method> all_methods();

/// Hyperparameter grid searched by cross-validation for one method.
struct MethodGrid {
    std::vector<double> C_values;
    std::vector<double> gamma_values;  ///< rbf methods
    bool gamma_scale = false;          ///< rbf: also try 1 / (d * var(X_train))
    std::vector<double> offset_values; ///< poly
};

/// Built-in grid for a method.
MethodGrid default_grid(Method method);

/// Thrown for configuration problems; message names the offending field.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    /// n_informative, flip_y and seed are ignored; they come from the cell.
    GeneratorConfig generator;
    std::vector<std::size_t> n_values{11};
    std::vector<double> noise_values{0.22};
    std::size_t reps = 3;
    bool hadamard_layers = true;
    std::vector<Method> methods;
    std::vector<uint64_t> seeds;
    uint64_t master_seed = 0;
    double test_fraction = 0.3;
    std::size_t folds = 5;
    /// Per-method n_samples; methods not listed use generator.n_samples.
    std::map<Method, std::size_t> sample_size_override;
    std::map<Method, MethodGrid> grids;  ///< overrides of default_grid
    SmoOptions smo;

    /// Throws ConfigError.
    void validate() const;
    MethodGrid grid_for(Method method) const;
    std::size_t samples_for(Method method) const;
};

nlohmann::json experiment_config_to_json(const ExperimentConfig &config);
/// Strict: unknown keys and wrong types raise ConfigError naming the field.
ExperimentConfig experiment_config_from_json(const nlohmann::json &j);

/// Reads and validates a JSON config file. Parse errors report line and column.
ExperimentConfig load_experiment_config(const std::filesystem::path &path);

struct CellKey {
    std::size_t n_informative = 0;
    double flip_y = 0.0;
    uint64_t seed = 0;
    Method method = Method::quantum_zz;

    std::string to_string() const;
    auto operator<=>(const CellKey &) const = default;
};

uint64_t cell_seed(uint64_t master_seed, std::size_t n_informative, double flip_y, uint64_t seed);

struct RunRecord {
    CellKey key;
    std::size_t n_samples = 0;
    bool ok = true;
    std::string error;  ///< set when !ok
    double test_accuracy = 0.0;
    double cv_accuracy = 0.0;
    std::optional<double> kta;  ///< quantum_zz and rbf_binary: training Gram of the final model
    /// rbf methods: training Gram at the fixed gamma 1 / (d * var(X_train)),
    /// independent of the gamma picked by cross-validation.
    std::optional<double> kta_scale;
    double C = 0.0;
    std::optional<double> gamma;
    std::optional<double> offset;
    std::size_t n_support = 0;
    double wall_time_s = 0.0;  ///< journal only; not part of the CSV
};

nlohmann::json record_to_json(const RunRecord &record);
RunRecord record_from_json(const nlohmann::json &j);

/// Fixed CSV header, and one row with 17-significant-digit floats.
std::string records_csv_header();
std::string record_csv_row(const RunRecord &record);

/// Called with the dataset rows each fitted quantity sees ("thresholds",
/// "scaler", "gamma_scale", "cv", "train"), and once with the held-out rows
/// ("holdout"). Used to check for leakage.
using FitObserver = std::function<void(std::string_view stage, std::span<const std::size_t> rows)>;

struct RunOptions {
    std::size_t gram_threads = 1;
    FitObserver on_fit;
};

/// Runs one method on one cell. Stage failures are rethrown as
/// std::runtime_error annotated with the stage, cell and seed.
RunRecord run_cell(const ExperimentConfig &config, const CellKey &key, const RunOptions &options = {});

/// Runs every configured method on one (n, flip_y, seed) cell.
std::vector<RunRecord> run_single(const ExperimentConfig &config, std::size_t n_informative, double flip_y,
                                  uint64_t seed, const RunOptions &options = {});

/// All cells of the config in canonical order: n, flip_y, seed, method.
std::vector<CellKey> enumerate_cells(const ExperimentConfig &config);

struct SweepOptions {
    std::size_t workers = 1;
    /// Keep successful records already in the journal and only run the rest.
    bool resume = true;
    RunOptions run;
    /// Progress callback, called under the sink lock.
    std::function<void(const RunRecord &, std::size_t done, std::size_t total)> on_record;
};

struct SweepResult {
    std::vector<RunRecord> records;  ///< canonical order, one per cell
    std::size_t executed = 0;        ///< cells run in this invocation
    std::size_t reused = 0;          ///< cells taken from the journal
    std::size_t failed = 0;
};

/// Runs all cells, appending each record to `out_dir/records.jsonl` as it
/// completes, then writes records.csv, summary.json and summary.txt.
/// A cell whose failure is an exception becomes an error record.
SweepResult run_sweep(const ExperimentConfig &config, const std::filesystem::path &out_dir,
                      const SweepOptions &options = {});

/// Latest record per cell from a journal file; missing file gives an empty list.
std::vector<RunRecord> read_journal(const std::filesystem::path &path);

struct GroupStats {
    Method method = Method::quantum_zz;
    std::size_t n_informative = 0;
    double flip_y = 0.0;
    std::size_t count = 0;
    std::size_t excluded = 0;  ///< error records in the group
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  ///< n-1 denominator; 0 when count < 2
    bool single_seed = false;
    std::optional<double> mean_kta;
    std::optional<double> std_kta;
    std::optional<double> mean_kta_scale;
    std::optional<double> std_kta_scale;
};

struct GapEntry {
    std::size_t n_informative = 0;
    double flip_y = 0.0;
    double gap = 0.0;  ///< mean(quantum_zz) - mean(rbf_binary)
};

struct Summary {
    std::vector<GroupStats> groups;  ///< canonical order
    std::vector<GapEntry> gaps;
    std::size_t excluded = 0;
};

Summary aggregate(std::span<const RunRecord> records);
const GroupStats *find_group(const Summary &summary, Method method, std::size_t n, double flip_y);

nlohmann::json summary_to_json(const Summary &summary);
/// Accuracy, alignment and gap tables as plain text.
std::string format_summary(const Summary &summary);

void write_records_csv(std::span<const RunRecord> records, const std::filesystem::path &path);

}  // namespace qkp
