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

// qkp: generate datasets and run kernel experiments from JSON configs.
//
// Exit codes: 0 success, 1 invalid arguments or config, 2 runtime failure
// (including any failed experiment cell).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qkparity/dataset_io.h"
#include "qkparity/datagen.h"
#include "qkparity/experiments.h"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kFailed = 2;

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string build_info() {
    std::string info = std::string("qkp ") + QKPARITY_VERSION;
#if defined(__clang__)
    info += " (clang " __clang_version__;
#elif defined(__GNUC__)
    info += " (gcc " __VERSION__;
#else
    info += " (unknown compiler";
#endif
#ifdef NDEBUG
    info += ", release)";
#else
    info += ", debug)";
#endif
    return info;
}

std::filesystem::path default_out(const std::filesystem::path &config_path) {
    const char *env = std::getenv("QKP_OUTPUT_DIR");
    const std::filesystem::path base = env != nullptr && *env != '\0' ? env : "results";
    return base / config_path.stem();
}

nlohmann::json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot read config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InvalidInput(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                           ": malformed JSON: " + e.what());
    }
}

int cmd_generate(const std::filesystem::path &config_path, const std::filesystem::path &out_dir,
                 const std::string &name, int verbosity) {
    qkp::GeneratorConfig config;
    try {
        config = qkp::generator_config_from_json(read_json_file(config_path));
        config.validate();
    } catch (const InvalidInput &) {
        throw;
    } catch (const std::exception &e) {
        throw InvalidInput(e.what());
    }
    auto ds = qkp::generate_features(config);
    ds = qkp::apply_label_noise(qkp::assign_parity_labels(std::move(ds)), config.flip_y, config.seed);
    std::filesystem::create_directories(out_dir);
    qkp::write_dataset(ds, out_dir / name);
    if (verbosity > 0) {
        std::cerr << "wrote " << (out_dir / (name + ".csv")).string() << " and " << name << ".meta.json\n";
    }
    return kOk;
}

int cmd_experiment(const std::filesystem::path &config_path, std::filesystem::path out_dir, std::size_t workers,
                   int verbosity, bool sweep) {
    qkp::ExperimentConfig config;
    try {
        config = qkp::experiment_config_from_json(read_json_file(config_path));
    } catch (const InvalidInput &) {
        throw;
    } catch (const std::exception &e) {
        throw InvalidInput(e.what());
    }
    if (!sweep && (config.n_values.size() != 1 || config.noise_values.size() != 1)) {
        throw InvalidInput("run takes a single n_informative and flip_y; use sweep for grids");
    }
    if (out_dir.empty()) {
        out_dir = default_out(config_path);
    }

    qkp::SweepOptions options;
    options.workers = workers;
    options.resume = sweep;
    options.on_record = [&](const qkp::RunRecord &r, std::size_t done, std::size_t total) {
        if (!r.ok) {
            std::cerr << "[" << done << "/" << total << "] " << r.key.to_string() << " FAILED: " << r.error << "\n";
        } else if (verbosity > 0) {
            char line[160];
            std::snprintf(line, sizeof line, "[%zu/%zu] %s acc=%.4f (%.1fs)\n", done, total,
                          r.key.to_string().c_str(), r.test_accuracy, r.wall_time_s);
            std::cerr << line;
        }
    };
    qkp::SweepResult result;
    try {
        result = qkp::run_sweep(config, out_dir, options);
    } catch (const qkp::ConfigError &e) {
        throw InvalidInput(e.what());
    }
    std::cout << qkp::format_summary(qkp::aggregate(result.records));
    if (verbosity > 0 || result.reused > 0) {
        std::cerr << "cells: " << result.executed << " run, " << result.reused << " reused, " << result.failed
                  << " failed; outputs in " << out_dir.string() << "\n";
    }
    return result.failed == 0 ? kOk : kFailed;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum and classical kernel experiments on parity benchmarks"};
    app.set_version_flag("--version", build_info());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string name = "dataset";
    std::size_t workers = 1;
    std::vector<CLI::Option *> verbose_flags;

    auto *gen = app.add_subcommand("generate", "Write a synthetic dataset (CSV plus metadata sidecar)");
    gen->add_option("-c,--config", config_path, "Generator config (JSON)")->required();
    gen->add_option("-o,--out", out_dir, "Output directory")->required();
    gen->add_option("--name", name, "File stem inside the output directory")->capture_default_str();
    verbose_flags.push_back(gen->add_flag("-v,--verbose", "Log progress to stderr"));

    for (const char *sub : {"run", "sweep"}) {
        auto *cmd = app.add_subcommand(
            sub, std::string(sub) == "run" ? "Run every seed and method of a single (n, flip_y) setting"
                                           : "Run the (n, flip_y, seed, method) grid, resuming finished cells");
        cmd->add_option("-c,--config", config_path, "Experiment config (JSON)")->required();
        cmd->add_option("-o,--out", out_dir, "Output directory (default: $QKP_OUTPUT_DIR or ./results, plus the config name)");
        cmd->add_option("-w,--workers", workers, "Cells evaluated in parallel")
            ->capture_default_str()
            ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
        verbose_flags.push_back(cmd->add_flag("-v,--verbose", "Log each finished cell to stderr"));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    int verbosity = 0;
    for (const auto *flag : verbose_flags) {
        verbosity += static_cast<int>(flag->count());
    }
    try {
        if (gen->parsed()) {
            return cmd_generate(config_path, out_dir, name, verbosity);
        }
        const bool sweep = app.got_subcommand("sweep");
        return cmd_experiment(config_path, out_dir, workers, verbosity, sweep);
    } catch (const InvalidInput &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
}
