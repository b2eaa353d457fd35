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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ucabank/spatialbank.hpp"

namespace ucabank {

// SFBF dump layout (all integers little-endian):
//
//   offset  size  field
//   0       4     magic "SFBF"
//   4       1     format version (1)
//   5       1     rank R (3 for features, 4 for filter weights)
//   6       1     payload kind (0 = features, 1 = filter weights)
//   7       9     reserved, zero
//   16      4*R   u32 dims, outermost first
//   16+4R   ...   f32 payload, row-major over dims
//
// Features use dims [2I, T, F] with channels interleaved Re/Im per filter.
// Filter weights use dims [I, F, M, 2] with the last axis (re, im).

inline constexpr std::uint8_t kSfbfVersion = 1;

enum class SfbfKind : std::uint8_t { Features = 0, FilterWeights = 1 };

struct SfbfFile {
    SfbfKind kind = SfbfKind::Features;
    std::vector<std::uint32_t> dims;
    std::vector<float> payload;
};

/// Serialized bytes; exposed so callers can hash or compare dumps in memory.
std::vector<std::uint8_t> encode_sfbf(const SfbfFile& file);
SfbfFile decode_sfbf(const std::vector<std::uint8_t>& bytes);

void write_sfbf(const std::filesystem::path& path, const SfbfFile& file);
SfbfFile read_sfbf(const std::filesystem::path& path);

SfbfFile to_sfbf(const FeatureTensor& features);
SfbfFile to_sfbf(const FilterBank& bank);

/// Features back from a dump; values carry f32 precision.
FeatureTensor features_from_sfbf(const SfbfFile& file);

/// One CSV per feature channel (`channel_XX.csv`, T rows by F columns).
void export_features_csv(const std::filesystem::path& dir, const FeatureTensor& features);

}  // namespace ucabank
