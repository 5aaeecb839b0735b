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

#include "qkparity/experiments.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "qkparity/dataset_io.h"
#include "qkparity/encoding.h"
#include "qkparity/kernels.h"
#include "qkparity/rng.h"

namespace qkp {

namespace {

bool uses_binary_features(Method m) {
    return m == Method::rbf_binary || m == Method::poly_binary_d11 || m == Method::quantum_zz;
}

std::vector<int> gather(std::span<const int> values, std::span<const std::size_t> idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) {
        out.push_back(values[i]);
    }
    return out;
}

// Variance over every entry of the table, as used by the "scale" gamma heuristic.
double table_variance(const Matrix &x) {
    const auto data = x.data();
    double mean = 0.0;
    for (double v : data) mean += v;
    mean /= static_cast<double>(data.size());
    double var = 0.0;
    for (double v : data) var += (v - mean) * (v - mean);
    return var / static_cast<double>(data.size());
}

KernelSpec kernel_for(Method m, const ExperimentConfig &config, std::size_t n, std::optional<double> param) {
    switch (m) {
        case Method::linear_svc:
            return KernelSpec::linear();
        case Method::rbf_continuous:
        case Method::rbf_binary:
            return KernelSpec::rbf(*param);
        case Method::poly_binary_d11:
            return KernelSpec::poly(11, *param, true);
        case Method::quantum_zz: {
            FeatureMapConfig fm;
            fm.n_qubits = n;
            fm.reps = config.reps;
            fm.hadamard_layers = config.hadamard_layers;
            return KernelSpec::quantum(fm);
        }
    }
    throw std::logic_error("unhandled method");
}

void notify(const RunOptions &options, std::string_view stage, std::span<const std::size_t> rows) {
    if (options.on_fit) {
        options.on_fit(stage, rows);
    }
}

}  // namespace

std::string CellKey::to_string() const {
    return "n=" + std::to_string(n_informative) + " flip_y=" + format_double(flip_y) + " seed=" + std::to_string(seed) +
           " method=" + std::string(qkp::to_string(method));
}

uint64_t cell_seed(uint64_t master_seed, std::size_t n_informative, double flip_y, uint64_t seed) {
    uint64_t s = mix_seed(master_seed, n_informative);
    s = mix_seed(s, std::bit_cast<uint64_t>(flip_y));
    return mix_seed(s, seed);
}

RunRecord run_cell(const ExperimentConfig &config, const CellKey &key, const RunOptions &options) {
    const auto start = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.key = key;
    rec.n_samples = config.samples_for(key.method);
    std::string stage = "generate";
    try {
        const uint64_t seed = cell_seed(config.master_seed, key.n_informative, key.flip_y, key.seed);
        GeneratorConfig g = config.generator;
        g.n_informative = key.n_informative;
        g.flip_y = key.flip_y;
        g.n_samples = rec.n_samples;
        g.seed = seed;
        g.validate();
        Dataset ds = apply_label_noise(assign_parity_labels(generate_features(g)), key.flip_y, seed);

        stage = "split";
        const auto split = stratified_split(ds, config.test_fraction, seed);
        notify(options, "holdout", split.test_idx);
        const Matrix view = select_informative(ds);
        const Matrix train_view = view.take_rows(split.train_idx);
        const Matrix test_view = view.take_rows(split.test_idx);
        const auto y_train01 = gather(ds.labels, split.train_idx);
        const auto y_test = to_signed_labels(gather(ds.labels, split.test_idx));
        const auto y_train = to_signed_labels(y_train01);

        stage = "encode";
        Matrix x_train;
        Matrix x_test;
        if (uses_binary_features(key.method)) {
            notify(options, "thresholds", split.train_idx);
            const auto thresholds = fit_thresholds(train_view);
            x_train = encode_binary(train_view, thresholds);
            x_test = encode_binary(test_view, thresholds);
        } else {
            notify(options, "scaler", split.train_idx);
            const auto scaler = fit_scaler(train_view);
            x_train = scale_minmax(train_view, scaler);
            x_test = scale_minmax(test_view, scaler);
        }

        stage = "grid";
        const MethodGrid mg = config.grid_for(key.method);
        GridSpec grid;
        grid.C_values = mg.C_values;
        if (key.method == Method::rbf_continuous || key.method == Method::rbf_binary) {
            grid.gamma_values = mg.gamma_values;
            if (mg.gamma_scale) {
                notify(options, "gamma_scale", split.train_idx);
                const double var = table_variance(x_train);
                if (var > 0.0) {
                    const double scale = 1.0 / (static_cast<double>(x_train.cols()) * var);
                    if (std::find(grid.gamma_values.begin(), grid.gamma_values.end(), scale) == grid.gamma_values.end()) {
                        grid.gamma_values.push_back(scale);
                    }
                }
            }
        } else if (key.method == Method::poly_binary_d11) {
            grid.offset_values = mg.offset_values;
        }

        std::optional<StateCache> cache;
        GramOptions gram_options;
        gram_options.threads = options.gram_threads;
        if (key.method == Method::quantum_zz) {
            cache.emplace(kernel_for(key.method, config, key.n_informative, std::nullopt).feature_map);
            gram_options.cache = &*cache;
        }
        std::map<std::optional<double>, Matrix> grams;
        auto train_gram = [&](std::optional<double> param) -> const Matrix & {
            auto it = grams.find(param);
            if (it == grams.end()) {
                const auto spec = kernel_for(key.method, config, key.n_informative, param);
                it = grams.emplace(param, gram(x_train, spec, gram_options).values).first;
            }
            return it->second;
        };

        stage = "cv";
        notify(options, "cv", split.train_idx);
        const auto plan = make_cv_plan(y_train01, config.folds, seed);
        const auto cv = cross_validate([&](std::optional<double> p) { return train_gram(p); }, y_train, grid, plan,
                                       config.smo);
        const std::optional<double> best_param = cv.best.gamma ? cv.best.gamma : cv.best.offset;

        stage = "train";
        notify(options, "train", split.train_idx);
        const Matrix &k_train = train_gram(best_param);
        const auto model = train(k_train, y_train, cv.best.C, config.smo);

        stage = "predict";
        const auto spec = kernel_for(key.method, config, key.n_informative, best_param);
        const auto k_test = cross_gram(x_test, x_train, spec, gram_options).values;
        const auto prediction = predict(model, k_test);

        rec.test_accuracy = accuracy(prediction.labels, y_test);
        rec.cv_accuracy = cv.best.mean_accuracy;
        rec.C = cv.best.C;
        rec.gamma = cv.best.gamma;
        rec.offset = cv.best.offset;
        rec.n_support = model.support_idx.size();
        if (key.method == Method::quantum_zz || key.method == Method::rbf_binary) {
            stage = "kta";
            rec.kta = kta(k_train, y_train01);
        }
        if (key.method == Method::rbf_binary || key.method == Method::rbf_continuous) {
            stage = "kta";
            const double var = table_variance(x_train);
            if (var > 0.0) {
                const double gamma = 1.0 / (static_cast<double>(x_train.cols()) * var);
                rec.kta_scale = kta(gram(x_train, KernelSpec::rbf(gamma), gram_options).values, y_train01);
            }
        }
    } catch (const std::exception &e) {
        throw std::runtime_error("stage '" + stage + "' failed for " + key.to_string() + ": " + e.what());
    }
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<RunRecord> run_single(const ExperimentConfig &config, std::size_t n_informative, double flip_y,
                                  uint64_t seed, const RunOptions &options) {
    std::vector<RunRecord> out;
    for (Method m : config.methods) {
        out.push_back(run_cell(config, CellKey{n_informative, flip_y, seed, m}, options));
    }
    return out;
}

std::vector<CellKey> enumerate_cells(const ExperimentConfig &config) {
    std::vector<CellKey> cells;
    for (std::size_t n : config.n_values) {
        for (double noise : config.noise_values) {
            for (uint64_t seed : config.seeds) {
                for (Method m : config.methods) {
                    cells.push_back(CellKey{n, noise, seed, m});
                }
            }
        }
    }
    std::sort(cells.begin(), cells.end());
    return cells;
}

std::vector<RunRecord> read_journal(const std::filesystem::path &path) {
    std::map<CellKey, RunRecord> latest;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        // A torn final line from an interrupted write is skipped.
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            continue;
        }
        try {
            auto rec = record_from_json(j);
            latest[rec.key] = std::move(rec);
        } catch (const std::exception &) {
            continue;
        }
    }
    std::vector<RunRecord> out;
    for (auto &[k, r] : latest) {
        out.push_back(std::move(r));
    }
    return out;
}

SweepResult run_sweep(const ExperimentConfig &config, const std::filesystem::path &out_dir,
                      const SweepOptions &options) {
    config.validate();
    const auto config_path = out_dir / "config.json";
    const auto journal_path = out_dir / "records.jsonl";
    const auto config_json = experiment_config_to_json(config);
    if (options.resume && std::filesystem::exists(config_path)) {
        std::ifstream in(config_path);
        const auto previous = nlohmann::json::parse(in, nullptr, false);
        if (previous != config_json) {
            throw ConfigError("output directory " + out_dir.string() +
                              " holds results for a different config; choose another --out");
        }
    }

    const auto cells = enumerate_cells(config);
    std::map<CellKey, RunRecord> done;
    if (options.resume) {
        for (auto &rec : read_journal(journal_path)) {
            if (rec.ok && std::binary_search(cells.begin(), cells.end(), rec.key)) {
                done[rec.key] = std::move(rec);
            }
        }
    }

    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(config_path, std::ios::trunc);
        out << config_json.dump(2) << '\n';
    }
    bool torn_tail = false;
    if (options.resume && std::filesystem::exists(journal_path) && std::filesystem::file_size(journal_path) > 0) {
        std::ifstream tail(journal_path, std::ios::binary);
        tail.seekg(-1, std::ios::end);
        torn_tail = tail.get() != '\n';
    }
    std::ofstream journal(journal_path, options.resume ? std::ios::app : std::ios::trunc);
    if (!journal) {
        throw std::runtime_error("cannot open " + journal_path.string() + " for writing");
    }
    if (torn_tail) {
        journal << '\n';
    }

    std::vector<CellKey> todo;
    for (const auto &k : cells) {
        if (!done.contains(k)) {
            todo.push_back(k);
        }
    }

    SweepResult result;
    result.reused = done.size();
    std::mutex sink;
    std::size_t completed = result.reused;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t t = next.fetch_add(1);
            if (t >= todo.size()) {
                return;
            }
            RunRecord rec;
            try {
                rec = run_cell(config, todo[t], options.run);
            } catch (const std::exception &e) {
                rec = RunRecord{};
                rec.key = todo[t];
                rec.n_samples = config.samples_for(todo[t].method);
                rec.ok = false;
                rec.error = e.what();
            }
            std::lock_guard lock(sink);
            journal << record_to_json(rec).dump() << '\n';
            journal.flush();
            ++completed;
            if (options.on_record) {
                options.on_record(rec, completed, cells.size());
            }
            done[rec.key] = std::move(rec);
        }
    };
    const std::size_t n_workers = std::max<std::size_t>(1, std::min(options.workers, todo.size()));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    result.executed = todo.size();

    for (const auto &k : cells) {
        result.records.push_back(done.at(k));
        result.failed += result.records.back().ok ? 0 : 1;
    }
    write_records_csv(result.records, out_dir / "records.csv");
    const auto summary = aggregate(result.records);
    {
        std::ofstream out(out_dir / "summary.json", std::ios::trunc);
        out << summary_to_json(summary).dump(2) << '\n';
    }
    {
        std::ofstream out(out_dir / "summary.txt", std::ios::trunc);
        out << format_summary(summary);
    }
    return result;
}

}  // namespace qkp
