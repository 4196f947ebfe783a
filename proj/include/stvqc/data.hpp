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

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace stvqc {

struct BlochSample {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2 pi)
    int label = 0;
};

struct DatasetSpec {
    std::string id = "N1";
    uint32_t n_train = 1600;
    uint32_t n_test = 320;
    uint64_t seed = 0;
};

struct BlochDataset {
    DatasetSpec spec;
    std::vector<BlochSample> train;
    std::vector<BlochSample> test;
};

/// L1, L2, N1..N6.
const std::vector<std::string> &bloch_ids();
/// L1, N1, N3, N5 live on the RY great circle; the rest sample octants.
bool is_ry_plane(const std::string &id);
/// L1 and L2.
bool is_linear_separable(const std::string &id);

/// Train split first, then test, from one RNG seeded by spec.seed.
BlochDataset gen_bloch(const DatasetSpec &spec);

/// (Re a0, Im a0, Re a1, Im a1) of (cos t/2, e^{i phi} sin t/2).
std::array<double, 4> encode_bloch(const BlochSample &s);

/// Best accuracy of any single threshold on theta or on one encoded feature.
double threshold_certificate(const std::vector<BlochSample> &samples);

struct ImageSample {
    std::vector<double> pixels;  // row-major, values in [0, 1]
    int label = 0;
};

struct ImageDataset {
    uint32_t width = 0;
    uint32_t height = 0;
    std::vector<int> classes;  // original digit of label k
    std::vector<ImageSample> train;
    std::vector<ImageSample> test;
};

struct IdxImages {
    uint32_t count = 0;
    uint32_t rows = 0;
    uint32_t cols = 0;
    std::vector<uint8_t> pixels;  // count * rows * cols
};

/// IDX readers; gzip-compressed files are detected by magic and inflated.
IdxImages read_idx_images(const std::string &path);
std::vector<uint8_t> read_idx_labels(const std::string &path);

/// Non-overlapping average pooling of a rows x cols byte image to out_h x out_w,
/// scaled to [0, 1]. rows/cols must be multiples of the output size.
std::vector<double> avg_pool(const uint8_t *img, uint32_t rows, uint32_t cols, uint32_t out_h, uint32_t out_w);

/// Loads {train,t10k}-{images-idx3,labels-idx1}-ubyte[.gz] from `dir`, keeps
/// `classes` (label k = classes[k]), pools to out_h x out_w, and keeps the
/// first `n_test` matching test images. n_train = 0 keeps every train image.
ImageDataset ingest_images(const std::string &dir, const std::vector<int> &classes, uint32_t out_h,
                           uint32_t out_w, uint32_t n_test = 200, uint32_t n_train = 0);

void write_bloch_csv(std::ostream &out, const std::vector<BlochSample> &samples);
std::vector<BlochSample> read_bloch_csv(const std::string &path);
void write_image_csv(std::ostream &out, const std::vector<ImageSample> &samples);
std::vector<ImageSample> read_image_csv(const std::string &path);

nlohmann::json manifest_json(const DatasetSpec &spec);

}  // namespace stvqc
