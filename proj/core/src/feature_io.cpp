// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ucabank/feature_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "ucabank/error.hpp"

namespace ucabank {
namespace {

constexpr std::size_t kHeaderSize = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xFF));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint32_t checked_dim(std::size_t d) {
    require(d <= std::numeric_limits<std::uint32_t>::max(), ErrorCode::InvalidArgument,
            "dimension too large for SFBF");
    return static_cast<std::uint32_t>(d);
}

}  // namespace

std::vector<std::uint8_t> encode_sfbf(const SfbfFile& file) {
    require(!file.dims.empty() && file.dims.size() <= 255, ErrorCode::InvalidArgument,
            "SFBF rank must be in [1, 255]");
    std::size_t count = 1;
    for (auto d : file.dims) count *= d;
    require(count == file.payload.size(), ErrorCode::ShapeMismatch,
            "SFBF payload size does not match its dims");

    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + 4 * file.dims.size() + 4 * file.payload.size());
    for (char c : {'S', 'F', 'B', 'F'}) out.push_back(static_cast<std::uint8_t>(c));
    out.push_back(kSfbfVersion);
    out.push_back(static_cast<std::uint8_t>(file.dims.size()));
    out.push_back(static_cast<std::uint8_t>(file.kind));
    out.resize(kHeaderSize, 0);
    for (auto d : file.dims) put_u32(out, d);
    for (float v : file.payload) put_u32(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

SfbfFile decode_sfbf(const std::vector<std::uint8_t>& bytes) {
    require(bytes.size() >= kHeaderSize && std::memcmp(bytes.data(), "SFBF", 4) == 0,
            ErrorCode::Format, "not an SFBF file");
    require(bytes[4] == kSfbfVersion, ErrorCode::Format,
            "unsupported SFBF version " + std::to_string(bytes[4]));
    const std::size_t rank = bytes[5];
    require(rank >= 1, ErrorCode::Format, "SFBF rank is zero");
    require(bytes[6] <= 1, ErrorCode::Format, "unknown SFBF payload kind");
    require(bytes.size() >= kHeaderSize + 4 * rank, ErrorCode::Format, "truncated SFBF dims");

    SfbfFile file;
    file.kind = static_cast<SfbfKind>(bytes[6]);
    std::size_t count = 1;
    for (std::size_t r = 0; r < rank; ++r) {
        file.dims.push_back(get_u32(bytes.data() + kHeaderSize + 4 * r));
        count *= file.dims.back();
    }
    const std::size_t offset = kHeaderSize + 4 * rank;
    require(bytes.size() == offset + 4 * count, ErrorCode::Format,
            "SFBF payload length does not match dims");
    file.payload.resize(count);
    for (std::size_t n = 0; n < count; ++n) {
        file.payload[n] = std::bit_cast<float>(get_u32(bytes.data() + offset + 4 * n));
    }
    return file;
}

void write_sfbf(const std::filesystem::path& path, const SfbfFile& file) {
    const auto bytes = encode_sfbf(file);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(out), ErrorCode::Io, "failed writing " + path.string());
}

SfbfFile read_sfbf(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    return decode_sfbf(bytes);
}

SfbfFile to_sfbf(const FeatureTensor& features) {
    SfbfFile file;
    file.kind = SfbfKind::Features;
    for (auto d : features.data.dims()) file.dims.push_back(checked_dim(d));
    file.payload.reserve(features.data.size());
    for (double v : features.data.values()) file.payload.push_back(static_cast<float>(v));
    return file;
}

SfbfFile to_sfbf(const FilterBank& bank) {
    SfbfFile file;
    file.kind = SfbfKind::FilterWeights;
    const auto& w = bank.weights;
    file.dims = {checked_dim(w.dim(0)), checked_dim(w.dim(1)), checked_dim(w.dim(2)), 2};
    file.payload.reserve(2 * w.size());
    for (const cplx& v : w.values()) {
        file.payload.push_back(static_cast<float>(v.real()));
        file.payload.push_back(static_cast<float>(v.imag()));
    }
    return file;
}

FeatureTensor features_from_sfbf(const SfbfFile& file) {
    require(file.kind == SfbfKind::Features && file.dims.size() == 3, ErrorCode::Format,
            "SFBF file does not hold a rank-3 feature tensor");
    require(file.dims[0] % 2 == 0, ErrorCode::Format, "feature channel count must be even");
    FeatureTensor features;
    features.data = RealTensor(file.dims[0], file.dims[1], file.dims[2]);
    auto& values = features.data.values();
    for (std::size_t n = 0; n < values.size(); ++n) values[n] = file.payload[n];
    return features;
}

void export_features_csv(const std::filesystem::path& dir, const FeatureTensor& features) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec, ErrorCode::Io, "cannot create directory " + dir.string());
    const auto& d = features.data;
    char name[32];
    char cell[32];
    for (std::size_t c = 0; c < d.dim(0); ++c) {
        std::snprintf(name, sizeof(name), "channel_%02zu.csv", c);
        std::ofstream out(dir / name, std::ios::trunc);
        require(static_cast<bool>(out), ErrorCode::Io, "cannot create " + (dir / name).string());
        for (std::size_t k = 0; k < d.dim(1); ++k) {
            for (std::size_t f = 0; f < d.dim(2); ++f) {
                std::snprintf(cell, sizeof(cell), "%.9g", d(c, k, f));
                if (f > 0) out << ',';
                out << cell;
            }
            out << '\n';
        }
        require(static_cast<bool>(out), ErrorCode::Io, "failed writing " + (dir / name).string());
    }
}

}  // namespace ucabank
