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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "qkparity/dataset_io.h"
#include "qkparity/experiments.h"

namespace qkp {

namespace {

nlohmann::json optional_json(const std::optional<double> &v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

std::optional<double> optional_from(const nlohmann::json &j, const char *key) {
    if (!j.contains(key) || j[key].is_null()) {
        return std::nullopt;
    }
    return j[key].get<double>();
}

std::string csv_optional(const std::optional<double> &v) { return v ? format_double(*v) : ""; }

std::string csv_escape(const std::string &text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += "\"\"";
        } else if (c == '\n' || c == '\r') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out + "\"";
}

struct Moments {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double std = 0.0;
};

Moments moments(const std::vector<double> &v) {
    Moments m;
    if (v.empty()) {
        return m;
    }
    double sum = 0.0;
    for (double x : v) sum += x;
    m.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - m.mean) * (x - m.mean);
        m.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return m;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

std::string fixed(const char *fmt, double a, double b = 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

}  // namespace

nlohmann::json record_to_json(const RunRecord &r) {
    return {
        {"n_informative", r.key.n_informative},
        {"flip_y", r.key.flip_y},
        {"seed", r.key.seed},
        {"method", to_string(r.key.method)},
        {"n_samples", r.n_samples},
        {"status", r.ok ? "ok" : "error"},
        {"error", r.error},
        {"test_accuracy", r.test_accuracy},
        {"cv_accuracy", r.cv_accuracy},
        {"kta", optional_json(r.kta)},
        {"kta_scale", optional_json(r.kta_scale)},
        {"C", r.C},
        {"gamma", optional_json(r.gamma)},
        {"offset", optional_json(r.offset)},
        {"n_support", r.n_support},
        {"wall_time_s", r.wall_time_s},
    };
}

RunRecord record_from_json(const nlohmann::json &j) {
    RunRecord r;
    r.key.n_informative = j.at("n_informative").get<std::size_t>();
    r.key.flip_y = j.at("flip_y").get<double>();
    r.key.seed = j.at("seed").get<uint64_t>();
    r.key.method = method_from_string(j.at("method").get<std::string>());
    r.n_samples = j.at("n_samples").get<std::size_t>();
    r.ok = j.at("status").get<std::string>() == "ok";
    r.error = j.value("error", "");
    r.test_accuracy = j.at("test_accuracy").get<double>();
    r.cv_accuracy = j.at("cv_accuracy").get<double>();
    r.kta = optional_from(j, "kta");
    r.kta_scale = optional_from(j, "kta_scale");
    r.C = j.at("C").get<double>();
    r.gamma = optional_from(j, "gamma");
    r.offset = optional_from(j, "offset");
    r.n_support = j.at("n_support").get<std::size_t>();
    r.wall_time_s = j.value("wall_time_s", 0.0);
    return r;
}

std::string records_csv_header() {
    return "n_informative,flip_y,seed,method,n_samples,status,test_accuracy,cv_accuracy,kta,kta_scale,C,gamma,offset,n_support,"
           "error";
}

std::string record_csv_row(const RunRecord &r) {
    std::string row = std::to_string(r.key.n_informative) + ',' + format_double(r.key.flip_y) + ',' +
                      std::to_string(r.key.seed) + ',' + std::string(to_string(r.key.method)) + ',' +
                      std::to_string(r.n_samples) + ',' + (r.ok ? "ok" : "error") + ',';
    if (r.ok) {
        row += format_double(r.test_accuracy) + ',' + format_double(r.cv_accuracy) + ',' + csv_optional(r.kta) + ',' +
               csv_optional(r.kta_scale) + ',' + format_double(r.C) + ',' + csv_optional(r.gamma) + ',' + csv_optional(r.offset) + ',' +
               std::to_string(r.n_support) + ',';
    } else {
        row += ",,,,,,,," + csv_escape(r.error);
    }
    return row;
}

void write_records_csv(std::span<const RunRecord> records, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << records_csv_header() << '\n';
    for (const auto &r : records) {
        out << record_csv_row(r) << '\n';
    }
}

Summary aggregate(std::span<const RunRecord> records) {
    struct Acc {
        std::vector<double> accuracy;
        std::vector<double> kta;
        std::vector<double> kta_scale;
        std::size_t excluded = 0;
    };
    // Ordered by (n, flip_y, method).
    std::map<std::tuple<std::size_t, double, Method>, Acc> groups;
    Summary s;
    for (const auto &r : records) {
        auto &g = groups[{r.key.n_informative, r.key.flip_y, r.key.method}];
        if (!r.ok) {
            ++g.excluded;
            ++s.excluded;
            continue;
        }
        g.accuracy.push_back(r.test_accuracy);
        if (r.kta) {
            g.kta.push_back(*r.kta);
        }
        if (r.kta_scale) {
            g.kta_scale.push_back(*r.kta_scale);
        }
    }
    for (const auto &[key, acc] : groups) {
        GroupStats st;
        std::tie(st.n_informative, st.flip_y, st.method) = key;
        st.count = acc.accuracy.size();
        st.excluded = acc.excluded;
        const auto m = moments(acc.accuracy);
        st.mean_accuracy = m.mean;
        st.std_accuracy = m.std;
        st.single_seed = st.count == 1;
        if (!acc.kta.empty()) {
            const auto k = moments(acc.kta);
            st.mean_kta = k.mean;
            st.std_kta = k.std;
        }
        if (!acc.kta_scale.empty()) {
            const auto k = moments(acc.kta_scale);
            st.mean_kta_scale = k.mean;
            st.std_kta_scale = k.std;
        }
        s.groups.push_back(st);
    }
    for (const auto &q : s.groups) {
        if (q.method != Method::quantum_zz || q.count == 0) {
            continue;
        }
        const auto *rbf = find_group(s, Method::rbf_binary, q.n_informative, q.flip_y);
        if (rbf != nullptr && rbf->count > 0) {
            s.gaps.push_back(GapEntry{q.n_informative, q.flip_y, q.mean_accuracy - rbf->mean_accuracy});
        }
    }
    return s;
}

const GroupStats *find_group(const Summary &summary, Method method, std::size_t n, double flip_y) {
    for (const auto &g : summary.groups) {
        if (g.method == method && g.n_informative == n && g.flip_y == flip_y) {
            return &g;
        }
    }
    return nullptr;
}

nlohmann::json summary_to_json(const Summary &s) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto &g : s.groups) {
        groups.push_back({
            {"method", to_string(g.method)},
            {"n_informative", g.n_informative},
            {"flip_y", g.flip_y},
            {"count", g.count},
            {"excluded", g.excluded},
            {"mean_accuracy", number_or_null(g.mean_accuracy)},
            {"std_accuracy", g.std_accuracy},
            {"single_seed", g.single_seed},
            {"mean_kta", optional_json(g.mean_kta)},
            {"std_kta", optional_json(g.std_kta)},
            {"mean_kta_scale", optional_json(g.mean_kta_scale)},
            {"std_kta_scale", optional_json(g.std_kta_scale)},
        });
    }
    nlohmann::json gaps = nlohmann::json::array();
    for (const auto &g : s.gaps) {
        gaps.push_back({{"n_informative", g.n_informative}, {"flip_y", g.flip_y}, {"gap", g.gap}});
    }
    return {{"groups", groups}, {"gaps", gaps}, {"excluded", s.excluded}};
}

std::string format_summary(const Summary &s) {
    std::string out;
    bool any_single = false;
    out += "Test accuracy (mean +/- sample std over seeds)\n\n";
    char line[256];
    std::snprintf(line, sizeof line, "%4s  %7s  %-16s  %-18s  %5s\n", "n", "flip_y", "method", "accuracy", "seeds");
    out += line;
    for (const auto &g : s.groups) {
        const std::string acc =
            g.count == 0 ? "n/a" : fixed("%.3f +/- %.3f", g.mean_accuracy, g.std_accuracy) + (g.single_seed ? "*" : "");
        any_single |= g.single_seed;
        std::string seeds = std::to_string(g.count);
        if (g.excluded > 0) {
            seeds += " (" + std::to_string(g.excluded) + " failed)";
        }
        std::snprintf(line, sizeof line, "%4zu  %7.3f  %-16s  %-18s  %5s\n", g.n_informative, g.flip_y,
                      std::string(to_string(g.method)).c_str(), acc.c_str(), seeds.c_str());
        out += line;
    }

    bool any_kta = false;
    for (const auto &g : s.groups) any_kta |= g.mean_kta.has_value() || g.mean_kta_scale.has_value();
    if (any_kta) {
        out += "\nKernel-target alignment on the training Gram (mean +/- sample std)\n";
        out += "selected: kernel of the final model; scale: rbf at gamma = 1 / (d * var)\n\n";
        std::snprintf(line, sizeof line, "%4s  %7s  %-16s  %-18s  %-18s\n", "n", "flip_y", "method", "selected",
                      "scale");
        out += line;
        for (const auto &g : s.groups) {
            if (!g.mean_kta && !g.mean_kta_scale) continue;
            const std::string sel = g.mean_kta ? fixed("%.4f +/- %.4f", *g.mean_kta, *g.std_kta) : "-";
            const std::string sc =
                g.mean_kta_scale ? fixed("%.4f +/- %.4f", *g.mean_kta_scale, *g.std_kta_scale) : "-";
            std::snprintf(line, sizeof line, "%4zu  %7.3f  %-16s  %-18s  %-18s\n", g.n_informative, g.flip_y,
                          std::string(to_string(g.method)).c_str(), sel.c_str(), sc.c_str());
            out += line;
        }
    }

    if (!s.gaps.empty()) {
        out += "\nQuantum vs RBF on binary features (gap = quantum_zz - rbf_binary)\n\n";
        std::snprintf(line, sizeof line, "%4s  %7s  %-18s  %-18s  %7s  %-10s\n", "n", "flip_y", "quantum_zz",
                      "rbf_binary", "gap", "KTA(q)");
        out += line;
        for (const auto &gap : s.gaps) {
            const auto *q = find_group(s, Method::quantum_zz, gap.n_informative, gap.flip_y);
            const auto *r = find_group(s, Method::rbf_binary, gap.n_informative, gap.flip_y);
            std::snprintf(line, sizeof line, "%4zu  %7.3f  %-18s  %-18s  %+7.3f  %-10s\n", gap.n_informative,
                          gap.flip_y, fixed("%.3f +/- %.3f", q->mean_accuracy, q->std_accuracy).c_str(),
                          fixed("%.3f +/- %.3f", r->mean_accuracy, r->std_accuracy).c_str(), gap.gap,
                          q->mean_kta ? fixed("%.4f", *q->mean_kta).c_str() : "n/a");
            out += line;
        }
    }
    if (any_single) {
        out += "\n* single seed; std reported as 0\n";
    }
    if (s.excluded > 0) {
        out += "\n" + std::to_string(s.excluded) + " failed cell(s) excluded from the statistics\n";
    }
    return out;
}

}  // namespace qkp
