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

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "qkparity/datagen.h"

namespace qkp {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double value);

nlohmann::json generator_config_to_json(const GeneratorConfig &config);
/// Reads a GeneratorConfig; unknown keys are rejected, missing keys keep defaults.
GeneratorConfig generator_config_from_json(const nlohmann::json &j);

/// Writes `<stem>.csv` (columns f0..f{d-1}, label) and `<stem>.meta.json`.
void write_dataset(const Dataset &dataset, const std::filesystem::path &stem);

/// Inverse of write_dataset.
Dataset read_dataset(const std::filesystem::path &stem);

/// Writes a bare table as CSV with the given column prefix (debug dumps of encoded views).
void write_table_csv(const Matrix &table, const std::filesystem::path &path, const std::string &prefix = "c");

}  // namespace qkp
