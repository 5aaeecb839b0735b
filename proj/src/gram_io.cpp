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

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "qkparity/dataset_io.h"
#include "qkparity/kernels.h"

namespace qkp {

namespace {

constexpr const char *kMagic = "QKPGRAM1";

static_assert(std::endian::native == std::endian::little, "binary Gram format assumes a little-endian host");

}  // namespace

void write_gram_csv(const GramMatrix &gram, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << "row_id";
    for (std::size_t id : gram.col_ids) {
        out << ",c" << id;
    }
    out << '\n';
    for (std::size_t i = 0; i < gram.rows(); ++i) {
        out << gram.row_ids[i];
        for (std::size_t j = 0; j < gram.cols(); ++j) {
            out << ',' << format_double(gram.values(i, j));
        }
        out << '\n';
    }
}

void write_gram_binary(const GramMatrix &gram, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    const nlohmann::json header = {
        {"rows", gram.rows()},
        {"cols", gram.cols()},
        {"row_ids", gram.row_ids},
        {"col_ids", gram.col_ids},
        {"spec", kernel_spec_to_json(gram.spec)},
    };
    out << kMagic << '\n' << header.dump() << '\n';
    const auto data = gram.values.data();
    out.write(reinterpret_cast<const char *>(data.data()), static_cast<std::streamsize>(data.size_bytes()));
}

GramMatrix read_gram_binary(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string magic;
    std::string header_line;
    if (!std::getline(in, magic) || magic != kMagic || !std::getline(in, header_line)) {
        throw std::runtime_error(path.string() + " is not a qkparity Gram file");
    }
    const auto header = nlohmann::json::parse(header_line);
    GramMatrix gram;
    const auto rows = header.at("rows").get<std::size_t>();
    const auto cols = header.at("cols").get<std::size_t>();
    gram.values = Matrix(rows, cols);
    gram.row_ids = header.at("row_ids").get<std::vector<std::size_t>>();
    gram.col_ids = header.at("col_ids").get<std::vector<std::size_t>>();
    gram.spec = kernel_spec_from_json(header.at("spec"));
    auto data = gram.values.data();
    in.read(reinterpret_cast<char *>(data.data()), static_cast<std::streamsize>(data.size_bytes()));
    if (in.gcount() != static_cast<std::streamsize>(data.size_bytes())) {
        throw std::runtime_error(path.string() + ": truncated Gram payload");
    }
    return gram;
}

}  // namespace qkp
