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
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qkparity/experiments.h"
#include "qkparity/qsim.h"

namespace qkp {

namespace {

constexpr std::array<Method, 5> kMethods = {Method::linear_svc, Method::rbf_continuous, Method::rbf_binary,
                                            Method::poly_binary_d11, Method::quantum_zz};

bool is_rbf(Method m) { return m == Method::rbf_continuous || m == Method::rbf_binary; }

[[noreturn]] void fail(const std::string &field, const std::string &what) {
    throw ConfigError("config field '" + field + "': " + what);
}

const nlohmann::json &object_at(const nlohmann::json &j, const std::string &field) {
    if (!j.is_object()) {
        fail(field, "expected an object");
    }
    return j;
}

void reject_unknown(const nlohmann::json &j, const std::string &prefix, std::initializer_list<std::string_view> known) {
    for (const auto &[k, v] : j.items()) {
        if (std::find(known.begin(), known.end(), k) == known.end()) {
            fail(prefix + k, "unknown key");
        }
    }
}

bool is_nonnegative_integer(const nlohmann::json &j) {
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<int64_t>() >= 0);
}

std::size_t as_count(const nlohmann::json &j, const std::string &field) {
    if (!is_nonnegative_integer(j)) {
        fail(field, "expected a nonnegative integer");
    }
    return j.get<std::size_t>();
}

uint64_t as_u64(const nlohmann::json &j, const std::string &field) {
    if (!is_nonnegative_integer(j)) {
        fail(field, "expected a nonnegative 64-bit integer");
    }
    return j.get<uint64_t>();
}

double as_double(const nlohmann::json &j, const std::string &field) {
    if (!j.is_number()) {
        fail(field, "expected a number");
    }
    return j.get<double>();
}

bool as_bool(const nlohmann::json &j, const std::string &field) {
    if (!j.is_boolean()) {
        fail(field, "expected true or false");
    }
    return j.get<bool>();
}

std::vector<double> as_doubles(const nlohmann::json &j, const std::string &field) {
    if (j.is_number()) {
        return {j.get<double>()};
    }
    if (!j.is_array()) {
        fail(field, "expected a number or a list of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(as_double(j[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Method as_method(const nlohmann::json &j, const std::string &field) {
    if (!j.is_string()) {
        fail(field, "expected a method name");
    }
    try {
        return method_from_string(j.get<std::string>());
    } catch (const std::invalid_argument &e) {
        fail(field, e.what());
    }
}

MethodGrid parse_grid(const nlohmann::json &j, const std::string &field, Method method) {
    object_at(j, field);
    reject_unknown(j, field + ".", {"C", "gamma", "gamma_scale", "offset"});
    MethodGrid g = default_grid(method);
    if (j.contains("C")) g.C_values = as_doubles(j["C"], field + ".C");
    if (j.contains("gamma")) g.gamma_values = as_doubles(j["gamma"], field + ".gamma");
    if (j.contains("gamma_scale")) g.gamma_scale = as_bool(j["gamma_scale"], field + ".gamma_scale");
    if (j.contains("offset")) g.offset_values = as_doubles(j["offset"], field + ".offset");
    return g;
}

template <typename T>
bool has_duplicates(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
}

void validate_grid(const MethodGrid &g, Method m) {
    const std::string field = "grids." + std::string(to_string(m));
    if (g.C_values.empty()) fail(field + ".C", "must not be empty");
    for (double c : g.C_values) {
        if (!(c > 0.0) || !std::isfinite(c)) fail(field + ".C", "values must be positive");
    }
    if (is_rbf(m)) {
        if (g.gamma_values.empty() && !g.gamma_scale) fail(field + ".gamma", "rbf methods need gamma values");
        for (double v : g.gamma_values) {
            if (!(v > 0.0) || !std::isfinite(v)) fail(field + ".gamma", "values must be positive");
        }
    } else if (!g.gamma_values.empty() || g.gamma_scale) {
        fail(field + ".gamma", "only rbf methods take gamma");
    }
    if (m == Method::poly_binary_d11) {
        if (g.offset_values.empty()) fail(field + ".offset", "poly needs offset values");
        for (double v : g.offset_values) {
            if (!(v >= 0.0) || !std::isfinite(v)) fail(field + ".offset", "values must be nonnegative");
        }
    } else if (!g.offset_values.empty()) {
        fail(field + ".offset", "only poly_binary_d11 takes offsets");
    }
}

std::pair<std::size_t, std::size_t> line_column(const std::string &text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::linear_svc:
            return "linear_svc";
        case Method::rbf_continuous:
            return "rbf_continuous";
        case Method::rbf_binary:
            return "rbf_binary";
        case Method::poly_binary_d11:
            return "poly_binary_d11";
        case Method::quantum_zz:
            return "quantum_zz";
    }
    return "?";
}

Method method_from_string(std::string_view name) {
    for (Method m : kMethods) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw std::invalid_argument("unknown method '" + std::string(name) +
                                "' (expected linear_svc, rbf_continuous, rbf_binary, poly_binary_d11 or quantum_zz)");
}

std::span<const Method> all_methods() { return kMethods; }

MethodGrid default_grid(Method method) {
    MethodGrid g;
    switch (method) {
        case Method::quantum_zz:
            g.C_values = {1, 10, 100, 1000, 10000};
            break;
        case Method::rbf_continuous:
        case Method::rbf_binary:
            g.C_values = {0.1, 1, 10, 100, 1000};
            g.gamma_values = {0.001, 0.01, 0.1, 1, 10};
            g.gamma_scale = true;
            break;
        case Method::poly_binary_d11:
            g.C_values = {0.1, 1, 10, 100, 1000};
            g.offset_values = {0, 1, 10};
            break;
        case Method::linear_svc:
            g.C_values = {1};
            break;
    }
    return g;
}

MethodGrid ExperimentConfig::grid_for(Method method) const {
    const auto it = grids.find(method);
    return it == grids.end() ? default_grid(method) : it->second;
}

std::size_t ExperimentConfig::samples_for(Method method) const {
    const auto it = sample_size_override.find(method);
    return it == sample_size_override.end() ? generator.n_samples : it->second;
}

void ExperimentConfig::validate() const {
    if (methods.empty()) fail("methods", "must not be empty");
    if (has_duplicates(methods)) fail("methods", "contains duplicates");
    if (seeds.empty()) fail("seeds", "must not be empty");
    if (has_duplicates(seeds)) fail("seeds", "contains duplicates");
    if (n_values.empty()) fail("n_informative", "must not be empty");
    if (has_duplicates(n_values)) fail("n_informative", "contains duplicates");
    if (noise_values.empty()) fail("flip_y", "must not be empty");
    if (has_duplicates(noise_values)) fail("flip_y", "contains duplicates");
    if (reps < 1) fail("reps", "must be at least 1");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) fail("test_fraction", "must lie in (0, 1)");
    if (folds < 2) fail("folds", "must be at least 2");
    if (!(smo.tol > 0.0)) fail("smo.tol", "must be positive");
    if (smo.max_iterations < 1) fail("smo.max_iterations", "must be at least 1");

    std::set<std::size_t> sample_sizes{generator.n_samples};
    for (const auto &[m, size] : sample_size_override) {
        sample_sizes.insert(size);
    }
    for (std::size_t n : n_values) {
        for (double noise : noise_values) {
            for (std::size_t size : sample_sizes) {
                GeneratorConfig g = generator;
                g.n_informative = n;
                g.flip_y = noise;
                g.n_samples = size;
                try {
                    g.validate();
                } catch (const std::invalid_argument &e) {
                    throw ConfigError(std::string("config: ") + e.what());
                }
                const double test_rows = test_fraction * static_cast<double>(size);
                if (test_rows < 2.0 || static_cast<double>(size) - test_rows < 2.0 * static_cast<double>(folds)) {
                    fail("test_fraction", "leaves too few rows for the split and " + std::to_string(folds) + " folds");
                }
            }
        }
    }
    for (Method m : methods) {
        validate_grid(grid_for(m), m);
        if (m == Method::quantum_zz) {
            for (std::size_t n : n_values) {
                FeatureMapConfig fm;
                fm.n_qubits = n;
                fm.reps = reps;
                if (n > fm.max_qubits) {
                    fail("n_informative", "quantum_zz supports at most " + std::to_string(fm.max_qubits) + " qubits");
                }
            }
        }
    }
}

nlohmann::json experiment_config_to_json(const ExperimentConfig &c) {
    nlohmann::json j;
    j["generator"] = {
        {"n_samples", c.generator.n_samples},
        {"n_features", c.generator.n_features},
        {"n_redundant", c.generator.n_redundant},
        {"clusters_per_class", c.generator.clusters_per_class},
        {"class_sep", c.generator.class_sep},
    };
    j["n_informative"] = c.n_values;
    j["flip_y"] = c.noise_values;
    j["reps"] = c.reps;
    j["hadamard_layers"] = c.hadamard_layers;
    j["methods"] = nlohmann::json::array();
    for (Method m : c.methods) j["methods"].push_back(to_string(m));
    j["seeds"] = c.seeds;
    j["master_seed"] = c.master_seed;
    j["test_fraction"] = c.test_fraction;
    j["folds"] = c.folds;
    j["sample_size_override"] = nlohmann::json::object();
    for (const auto &[m, size] : c.sample_size_override) j["sample_size_override"][std::string(to_string(m))] = size;
    j["grids"] = nlohmann::json::object();
    for (const auto &[m, g] : c.grids) {
        nlohmann::json gj = {{"C", g.C_values}};
        if (is_rbf(m)) {
            gj["gamma"] = g.gamma_values;
            gj["gamma_scale"] = g.gamma_scale;
        }
        if (m == Method::poly_binary_d11) gj["offset"] = g.offset_values;
        j["grids"][std::string(to_string(m))] = gj;
    }
    j["smo"] = {{"tol", c.smo.tol}, {"max_iterations", c.smo.max_iterations}};
    return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json &j) {
    object_at(j, "<root>");
    reject_unknown(j, "", {"description", "generator", "n_informative", "flip_y", "reps", "hadamard_layers", "methods",
                           "seeds", "master_seed", "test_fraction", "folds", "sample_size_override", "grids", "smo"});
    ExperimentConfig c;
    if (j.contains("description") && !j["description"].is_string()) fail("description", "expected a string");
    if (j.contains("generator")) {
        const auto &g = object_at(j["generator"], "generator");
        reject_unknown(g, "generator.", {"n_samples", "n_features", "n_redundant", "clusters_per_class", "class_sep"});
        if (g.contains("n_samples")) c.generator.n_samples = as_count(g["n_samples"], "generator.n_samples");
        if (g.contains("n_features")) c.generator.n_features = as_count(g["n_features"], "generator.n_features");
        if (g.contains("n_redundant")) c.generator.n_redundant = as_count(g["n_redundant"], "generator.n_redundant");
        if (g.contains("clusters_per_class"))
            c.generator.clusters_per_class = as_count(g["clusters_per_class"], "generator.clusters_per_class");
        if (g.contains("class_sep")) c.generator.class_sep = as_double(g["class_sep"], "generator.class_sep");
    }
    if (j.contains("n_informative")) {
        const auto &v = j["n_informative"];
        c.n_values.clear();
        if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i)
                c.n_values.push_back(as_count(v[i], "n_informative[" + std::to_string(i) + "]"));
        } else {
            c.n_values.push_back(as_count(v, "n_informative"));
        }
    }
    if (j.contains("flip_y")) c.noise_values = as_doubles(j["flip_y"], "flip_y");
    for (double v : c.noise_values) {
        if (!(v >= 0.0 && v <= 1.0)) fail("flip_y", "must lie in [0, 1], got " + std::to_string(v));
    }
    if (j.contains("reps")) c.reps = as_count(j["reps"], "reps");
    if (j.contains("hadamard_layers")) c.hadamard_layers = as_bool(j["hadamard_layers"], "hadamard_layers");
    if (!j.contains("methods")) fail("methods", "is required");
    if (!j["methods"].is_array()) fail("methods", "expected a list of method names");
    for (std::size_t i = 0; i < j["methods"].size(); ++i) {
        c.methods.push_back(as_method(j["methods"][i], "methods[" + std::to_string(i) + "]"));
    }
    if (!j.contains("seeds")) fail("seeds", "is required");
    if (!j["seeds"].is_array()) fail("seeds", "expected a list of integers");
    for (std::size_t i = 0; i < j["seeds"].size(); ++i) {
        c.seeds.push_back(as_u64(j["seeds"][i], "seeds[" + std::to_string(i) + "]"));
    }
    if (j.contains("master_seed")) c.master_seed = as_u64(j["master_seed"], "master_seed");
    if (j.contains("test_fraction")) c.test_fraction = as_double(j["test_fraction"], "test_fraction");
    if (j.contains("folds")) c.folds = as_count(j["folds"], "folds");
    if (j.contains("sample_size_override")) {
        const auto &o = object_at(j["sample_size_override"], "sample_size_override");
        for (const auto &[k, v] : o.items()) {
            const std::string field = "sample_size_override." + k;
            c.sample_size_override[as_method(k, field)] = as_count(v, field);
        }
    }
    if (j.contains("grids")) {
        const auto &o = object_at(j["grids"], "grids");
        for (const auto &[k, v] : o.items()) {
            const std::string field = "grids." + k;
            const Method m = as_method(k, field);
            c.grids[m] = parse_grid(v, field, m);
        }
    }
    if (j.contains("smo")) {
        const auto &s = object_at(j["smo"], "smo");
        reject_unknown(s, "smo.", {"tol", "max_iterations"});
        if (s.contains("tol")) c.smo.tol = as_double(s["tol"], "smo.tol");
        if (s.contains("max_iterations")) c.smo.max_iterations = as_count(s["max_iterations"], "smo.max_iterations");
    }
    c.validate();
    return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        const auto [line, col] = line_column(text, e.byte);
        throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": malformed JSON: " + e.what());
    }
    return experiment_config_from_json(j);
}

}  // namespace qkp
