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

#include "qkparity/dataset_io.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qkp {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path &stem, const char *suffix) {
    return std::filesystem::path(stem.string() + suffix);
}

std::ofstream open_out(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

nlohmann::json generator_config_to_json(const GeneratorConfig &c) {
    return {
        {"n_samples", c.n_samples},
        {"n_features", c.n_features},
        {"n_informative", c.n_informative},
        {"n_redundant", c.n_redundant},
        {"clusters_per_class", c.clusters_per_class},
        {"class_sep", c.class_sep},
        {"flip_y", c.flip_y},
        {"seed", c.seed},
    };
}

GeneratorConfig generator_config_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw std::invalid_argument("generator config must be a JSON object");
    }
    GeneratorConfig c;
    for (const auto &[key, value] : j.items()) {
        try {
            if (key == "n_samples") {
                c.n_samples = value.get<std::size_t>();
            } else if (key == "n_features") {
                c.n_features = value.get<std::size_t>();
            } else if (key == "n_informative") {
                c.n_informative = value.get<std::size_t>();
            } else if (key == "n_redundant") {
                c.n_redundant = value.get<std::size_t>();
            } else if (key == "clusters_per_class") {
                c.clusters_per_class = value.get<std::size_t>();
            } else if (key == "class_sep") {
                c.class_sep = value.get<double>();
            } else if (key == "flip_y") {
                c.flip_y = value.get<double>();
            } else if (key == "seed") {
                c.seed = value.get<uint64_t>();
            } else {
                throw std::invalid_argument("unknown generator field '" + key + "'");
            }
        } catch (const nlohmann::json::exception &e) {
            throw std::invalid_argument("generator field '" + key + "': " + e.what());
        }
    }
    return c;
}

void write_dataset(const Dataset &ds, const std::filesystem::path &stem) {
    const std::size_t n = ds.n_samples();
    const std::size_t d = ds.features.cols();
    {
        auto out = open_out(with_suffix(stem, ".csv"));
        for (std::size_t c = 0; c < d; ++c) {
            out << 'f' << c << ',';
        }
        out << "label\n";
        for (std::size_t r = 0; r < n; ++r) {
            for (double v : ds.features.row(r)) {
                out << format_double(v) << ',';
            }
            out << (ds.labels.empty() ? -1 : ds.labels[r]) << '\n';
        }
    }
    nlohmann::json meta = {
        {"format", "qkparity-dataset-v1"},
        {"config", generator_config_to_json(ds.config)},
        {"n_samples", n},
        {"n_features", d},
        {"informative_idx", ds.informative_idx},
        {"medians_full", ds.medians_full},
        {"seed", ds.seed},
        {"labels_assigned", !ds.labels.empty()},
    };
    auto out = open_out(with_suffix(stem, ".meta.json"));
    out << meta.dump(2) << '\n';
}

Dataset read_dataset(const std::filesystem::path &stem) {
    std::ifstream meta_in(with_suffix(stem, ".meta.json"));
    if (!meta_in) {
        throw std::runtime_error("cannot read " + with_suffix(stem, ".meta.json").string());
    }
    const auto meta = nlohmann::json::parse(meta_in);
    Dataset ds;
    ds.config = generator_config_from_json(meta.at("config"));
    ds.seed = meta.at("seed").get<uint64_t>();
    ds.informative_idx = meta.at("informative_idx").get<std::vector<std::size_t>>();
    ds.medians_full = meta.at("medians_full").get<std::vector<double>>();
    const auto n = meta.at("n_samples").get<std::size_t>();
    const auto d = meta.at("n_features").get<std::size_t>();
    const bool labelled = meta.at("labels_assigned").get<bool>();

    std::ifstream in(with_suffix(stem, ".csv"));
    if (!in) {
        throw std::runtime_error("cannot read " + with_suffix(stem, ".csv").string());
    }
    std::string line;
    std::getline(in, line);  // header
    ds.features = Matrix(n, d);
    if (labelled) {
        ds.labels.resize(n);
    }
    for (std::size_t r = 0; r < n; ++r) {
        if (!std::getline(in, line)) {
            throw std::runtime_error("dataset CSV truncated at row " + std::to_string(r));
        }
        const char *p = line.c_str();
        for (std::size_t c = 0; c < d; ++c) {
            char *end = nullptr;
            ds.features(r, c) = std::strtod(p, &end);
            if (end == p || *end != ',') {
                throw std::runtime_error("malformed dataset CSV at row " + std::to_string(r));
            }
            p = end + 1;
        }
        if (labelled) {
            ds.labels[r] = std::atoi(p);
        }
    }
    return ds;
}

void write_table_csv(const Matrix &table, const std::filesystem::path &path, const std::string &prefix) {
    auto out = open_out(path);
    for (std::size_t c = 0; c < table.cols(); ++c) {
        out << (c ? "," : "") << prefix << c;
    }
    out << '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.cols(); ++c) {
            out << (c ? "," : "") << format_double(table(r, c));
        }
        out << '\n';
    }
}

}  // namespace qkp
