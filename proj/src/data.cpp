// Copyright 2026 The stvqc Authors
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

#include "stvqc/data.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "stvqc/common.hpp"

namespace stvqc {

namespace {

// Arc table for the RY-plane sets, in units of pi. Boundaries b0 < b1 < b2 < b3
// split the circle into four arcs labelled 0, 1, 0, 1, each shrunk by kGap
// on both ends. L1 is listed directly as two arcs.
constexpr double kGap = 0.04;

struct Arc {
    double lo;
    double hi;
    int label;
};

std::vector<Arc> arcs_for(const std::string &id) {
    if (id == "L1") {
        return {{-0.4, 0.4, 0}, {0.6, 1.4, 1}};
    }
    std::array<double, 4> b{};
    if (id == "N1") {
        b = {0.1, 0.45, 0.8, 1.5};
    } else if (id == "N3") {
        b = {0.15, 0.5, 0.8, 1.7};
    } else if (id == "N5") {
        b = {0.35, 0.85, 1.4, 2.0};
    } else {
        throw Error("no arc table for '" + id + "'");
    }
    std::vector<Arc> arcs;
    for (int i = 0; i < 4; ++i) {
        const double hi = (i == 3 ? b[0] + 2.0 : b[i + 1]);
        arcs.push_back({b[i] + kGap, hi - kGap, i % 2});
    }
    return arcs;
}

// Octant sets: caps of this angular radius around the 8 octant centres.
constexpr double kCapRadius = 0.45;

using Signs = std::array<int, 3>;

int octant_label(const std::string &id, const Signs &s) {
    int v = 0;
    if (id == "L2") {
        v = s[2];
    } else if (id == "N2") {
        v = s[0] * s[1];
    } else if (id == "N4") {
        v = s[0] * s[2];
    } else if (id == "N6") {
        v = s[1] * s[2];
    } else {
        throw Error("no octant labelling for '" + id + "'");
    }
    return v > 0 ? 0 : 1;
}

// Within-class octant weights; N2 is deliberately uneven.
std::array<double, 4> octant_weights(const std::string &id) {
    if (id == "N2") {
        return {0.35, 0.3, 0.2, 0.15};
    }
    return {0.25, 0.25, 0.25, 0.25};
}

BlochSample from_alpha(double alpha, int label) {
    alpha = std::fmod(alpha, 2.0 * kPi);
    if (alpha < 0) {
        alpha += 2.0 * kPi;
    }
    if (alpha <= kPi) {
        return {alpha, 0.0, label};
    }
    return {2.0 * kPi - alpha, kPi, label};
}

void gen_ry_split(const std::string &id, uint32_t n, Rng &rng, std::vector<BlochSample> &out) {
    const auto arcs = arcs_for(id);
    for (int label : {0, 1}) {
        std::vector<Arc> mine;
        for (const auto &a : arcs) {
            if (a.label == label) {
                mine.push_back(a);
            }
        }
        const uint32_t count = label == 0 ? n / 2 : n - n / 2;
        for (uint32_t i = 0; i < count; ++i) {
            const Arc &a = mine[i % mine.size()];
            out.push_back(from_alpha(rng.uniform(a.lo, a.hi) * kPi, label));
        }
    }
}

void gen_octant_split(const std::string &id, uint32_t n, Rng &rng, std::vector<BlochSample> &out) {
    std::vector<Signs> octants;
    for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
            for (int sz : {1, -1}) {
                octants.push_back({sx, sy, sz});
            }
        }
    }
    const auto w = octant_weights(id);
    const double cos_cap = std::cos(kCapRadius);
    for (int label : {0, 1}) {
        std::vector<Signs> mine;
        for (const auto &s : octants) {
            if (octant_label(id, s) == label) {
                mine.push_back(s);
            }
        }
        const uint32_t count = label == 0 ? n / 2 : n - n / 2;
        const bool uniform = w[0] == w[1] && w[1] == w[2] && w[2] == w[3];
        for (uint32_t i = 0; i < count; ++i) {
            size_t k = i % mine.size();
            if (!uniform) {
                double u = rng.uniform();
                k = 0;
                while (k + 1 < mine.size() && u >= w[k]) {
                    u -= w[k];
                    ++k;
                }
            }
            const Signs &s = mine[k];
            const double r3 = 1.0 / std::sqrt(3.0);
            const std::array<double, 3> c{s[0] * r3, s[1] * r3, s[2] * r3};
            // Orthonormal frame (u, v) around the octant centre c.
            std::array<double, 3> u{c[1], -c[0], 0.0};
            const double un = std::hypot(u[0], u[1]);
            u = {u[0] / un, u[1] / un, 0.0};
            const std::array<double, 3> v{c[1] * u[2] - c[2] * u[1], c[2] * u[0] - c[0] * u[2],
                                          c[0] * u[1] - c[1] * u[0]};
            // Uniform on the cap: cos(psi) uniform in [cos r, 1].
            const double cp = rng.uniform(cos_cap, 1.0);
            const double sp = std::sqrt(std::max(0.0, 1.0 - cp * cp));
            const double az = rng.uniform(0.0, 2.0 * kPi);
            std::array<double, 3> p{};
            for (int d = 0; d < 3; ++d) {
                p[d] = cp * c[d] + sp * (std::cos(az) * u[d] + std::sin(az) * v[d]);
            }
            double phi = std::atan2(p[1], p[0]);
            if (phi < 0) {
                phi += 2.0 * kPi;
            }
            out.push_back({std::acos(std::clamp(p[2], -1.0, 1.0)), phi, label});
        }
    }
}

}  // namespace

const std::vector<std::string> &bloch_ids() {
    static const std::vector<std::string> ids{"L1", "L2", "N1", "N2", "N3", "N4", "N5", "N6"};
    return ids;
}

bool is_ry_plane(const std::string &id) { return id == "L1" || id == "N1" || id == "N3" || id == "N5"; }

bool is_linear_separable(const std::string &id) { return id == "L1" || id == "L2"; }

BlochDataset gen_bloch(const DatasetSpec &spec) {
    const auto &ids = bloch_ids();
    if (std::find(ids.begin(), ids.end(), spec.id) == ids.end()) {
        throw Error("unknown dataset id '" + spec.id + "' (valid: L1, L2, N1, N2, N3, N4, N5, N6)");
    }
    if (spec.n_train < 1 || spec.n_test < 1) {
        throw Error("dataset sizes must be positive");
    }
    BlochDataset d;
    d.spec = spec;
    Rng rng(spec.seed);
    auto split = [&](uint32_t n, std::vector<BlochSample> &out) {
        if (is_ry_plane(spec.id)) {
            gen_ry_split(spec.id, n, rng, out);
        } else {
            gen_octant_split(spec.id, n, rng, out);
        }
        shuffle_in_place(out, rng);
    };
    split(spec.n_train, d.train);
    split(spec.n_test, d.test);
    return d;
}

std::array<double, 4> encode_bloch(const BlochSample &s) {
    const double c = std::cos(s.theta / 2);
    const double sn = std::sin(s.theta / 2);
    return {c, 0.0, std::cos(s.phi) * sn, std::sin(s.phi) * sn};
}

double threshold_certificate(const std::vector<BlochSample> &samples) {
    if (samples.empty()) {
        return 0.0;
    }
    const size_t n = samples.size();
    auto best_for = [&](auto feature) {
        std::vector<std::pair<double, int>> v;
        v.reserve(n);
        for (const auto &s : samples) {
            v.emplace_back(feature(s), s.label);
        }
        std::sort(v.begin(), v.end());
        size_t total1 = 0;
        for (const auto &[x, y] : v) {
            total1 += y == 1;
        }
        const size_t total0 = n - total1;
        // Rule "x > t -> 1": correct = zeros at or below t + ones above t.
        size_t zeros_below = 0;
        size_t ones_below = 0;
        size_t best = std::max(total0, total1);
        for (size_t i = 0; i < n; ++i) {
            zeros_below += v[i].second == 0;
            ones_below += v[i].second == 1;
            if (i + 1 < n && v[i + 1].first == v[i].first) {
                continue;
            }
            const size_t a = zeros_below + (total1 - ones_below);
            const size_t b = ones_below + (total0 - zeros_below);
            best = std::max({best, a, b});
        }
        return static_cast<double>(best) / static_cast<double>(n);
    };
    double best = best_for([](const BlochSample &s) { return s.theta; });
    for (int f = 0; f < 4; ++f) {
        best = std::max(best, best_for([f](const BlochSample &s) { return encode_bloch(s)[f]; }));
    }
    return best;
}

// ---------------------------------------------------------------- images

namespace {

std::vector<uint8_t> read_all(const std::string &path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) {
        throw Error("cannot open '" + path + "'");
    }
    std::vector<uint8_t> out;
    uint8_t buf[1 << 15];
    while (true) {
        const int got = gzread(f, buf, sizeof(buf));
        if (got < 0) {
            gzclose(f);
            throw Error("failed to read '" + path + "' (corrupt gzip stream?)");
        }
        if (got == 0) {
            break;
        }
        out.insert(out.end(), buf, buf + got);
    }
    gzclose(f);
    return out;
}

uint32_t be32(const std::vector<uint8_t> &b, size_t off) {
    return (uint32_t{b[off]} << 24) | (uint32_t{b[off + 1]} << 16) | (uint32_t{b[off + 2]} << 8) | b[off + 3];
}

std::string find_idx(const std::string &dir, const std::string &stem) {
    for (const std::string &name : {stem, stem + ".gz"}) {
        const auto p = std::filesystem::path(dir) / name;
        if (std::filesystem::exists(p)) {
            return p.string();
        }
    }
    throw Error("missing '" + stem + "[.gz]' in '" + dir + "'");
}

}  // namespace

IdxImages read_idx_images(const std::string &path) {
    const auto b = read_all(path);
    if (b.size() < 16 || be32(b, 0) != 0x00000803) {
        throw Error("'" + path + "' is not an IDX image file");
    }
    IdxImages img;
    img.count = be32(b, 4);
    img.rows = be32(b, 8);
    img.cols = be32(b, 12);
    const size_t need = size_t{img.count} * img.rows * img.cols;
    if (b.size() < 16 + need) {
        throw Error("'" + path + "' is truncated");
    }
    img.pixels.assign(b.begin() + 16, b.begin() + 16 + static_cast<std::ptrdiff_t>(need));
    return img;
}

std::vector<uint8_t> read_idx_labels(const std::string &path) {
    const auto b = read_all(path);
    if (b.size() < 8 || be32(b, 0) != 0x00000801) {
        throw Error("'" + path + "' is not an IDX label file");
    }
    const uint32_t n = be32(b, 4);
    if (b.size() < 8 + size_t{n}) {
        throw Error("'" + path + "' is truncated");
    }
    return {b.begin() + 8, b.begin() + 8 + n};
}

std::vector<double> avg_pool(const uint8_t *img, uint32_t rows, uint32_t cols, uint32_t out_h, uint32_t out_w) {
    if (out_h == 0 || out_w == 0 || rows % out_h != 0 || cols % out_w != 0) {
        throw Error("cannot pool " + std::to_string(rows) + "x" + std::to_string(cols) + " to " +
                    std::to_string(out_h) + "x" + std::to_string(out_w));
    }
    const uint32_t kh = rows / out_h;
    const uint32_t kw = cols / out_w;
    std::vector<double> out(size_t{out_h} * out_w, 0.0);
    for (uint32_t y = 0; y < out_h; ++y) {
        for (uint32_t x = 0; x < out_w; ++x) {
            double s = 0.0;
            for (uint32_t dy = 0; dy < kh; ++dy) {
                for (uint32_t dx = 0; dx < kw; ++dx) {
                    s += img[(y * kh + dy) * cols + (x * kw + dx)];
                }
            }
            out[y * out_w + x] = std::clamp(s / (kh * kw * 255.0), 0.0, 1.0);
        }
    }
    return out;
}

ImageDataset ingest_images(const std::string &dir, const std::vector<int> &classes, uint32_t out_h,
                           uint32_t out_w, uint32_t n_test, uint32_t n_train) {
    if (classes.size() < 2) {
        throw Error("ingest_images needs at least two classes");
    }
    ImageDataset d;
    d.width = out_w;
    d.height = out_h;
    d.classes = classes;
    auto load = [&](const std::string &img_stem, const std::string &lbl_stem, uint32_t limit,
                    std::vector<ImageSample> &out) {
        const auto imgs = read_idx_images(find_idx(dir, img_stem));
        const auto lbls = read_idx_labels(find_idx(dir, lbl_stem));
        if (lbls.size() != imgs.count) {
            throw Error("image/label count mismatch in '" + dir + "'");
        }
        const size_t px = size_t{imgs.rows} * imgs.cols;
        for (uint32_t i = 0; i < imgs.count && (limit == 0 || out.size() < limit); ++i) {
            const auto it = std::find(classes.begin(), classes.end(), static_cast<int>(lbls[i]));
            if (it == classes.end()) {
                continue;
            }
            ImageSample s;
            s.pixels = avg_pool(imgs.pixels.data() + i * px, imgs.rows, imgs.cols, out_h, out_w);
            s.label = static_cast<int>(it - classes.begin());
            out.push_back(std::move(s));
        }
    };
    load("train-images-idx3-ubyte", "train-labels-idx1-ubyte", n_train, d.train);
    load("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte", n_test, d.test);
    if (d.train.empty() || d.test.empty()) {
        throw Error("no images of the requested classes in '" + dir + "'");
    }
    return d;
}

// ---------------------------------------------------------------- CSV

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string &path, std::string &header) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open dataset '" + path + "'");
    }
    std::getline(in, header);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

void write_bloch_csv(std::ostream &out, const std::vector<BlochSample> &samples) {
    out << "theta,phi,label\n";
    for (const auto &s : samples) {
        out << fmt(s.theta) << "," << fmt(s.phi) << "," << s.label << "\n";
    }
}

std::vector<BlochSample> read_bloch_csv(const std::string &path) {
    std::string header;
    const auto rows = read_csv_rows(path, header);
    if (header.rfind("theta,phi,label", 0) != 0) {
        throw Error("'" + path + "' is not a theta,phi,label CSV");
    }
    std::vector<BlochSample> out;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 3) {
            throw Error("'" + path + "' row " + std::to_string(i + 2) + " needs 3 columns");
        }
        out.push_back({std::stod(rows[i][0]), std::stod(rows[i][1]), std::stoi(rows[i][2])});
    }
    return out;
}

void write_image_csv(std::ostream &out, const std::vector<ImageSample> &samples) {
    const size_t n = samples.empty() ? 0 : samples.front().pixels.size();
    for (size_t k = 0; k < n; ++k) {
        out << "p" << k << ",";
    }
    out << "label\n";
    for (const auto &s : samples) {
        for (double p : s.pixels) {
            out << fmt(p) << ",";
        }
        out << s.label << "\n";
    }
}

std::vector<ImageSample> read_image_csv(const std::string &path) {
    std::string header;
    const auto rows = read_csv_rows(path, header);
    if (header.rfind("p0,", 0) != 0) {
        throw Error("'" + path + "' is not a pixel CSV (expected p0,...,label header)");
    }
    std::vector<ImageSample> out;
    for (const auto &r : rows) {
        if (r.size() < 2) {
            throw Error("'" + path + "' has a row with fewer than 2 columns");
        }
        ImageSample s;
        for (size_t k = 0; k + 1 < r.size(); ++k) {
            s.pixels.push_back(std::clamp(std::stod(r[k]), 0.0, 1.0));
        }
        s.label = std::stoi(r.back());
        out.push_back(std::move(s));
    }
    return out;
}

nlohmann::json manifest_json(const DatasetSpec &spec) {
    return {{"id", spec.id},
            {"n_train", spec.n_train},
            {"n_test", spec.n_test},
            {"seed", spec.seed},
            {"family", is_ry_plane(spec.id) ? "ry-plane" : "octant"},
            {"files", {{"train", spec.id + "_train.csv"}, {"test", spec.id + "_test.csv"}}}};
}

}  // namespace stvqc
