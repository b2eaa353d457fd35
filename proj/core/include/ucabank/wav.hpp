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

#include <filesystem>

#include "ucabank/stft.hpp"

namespace ucabank {

enum class WavEncoding { Pcm16, Float32 };

struct WavData {
    double sample_rate = 0.0;
    MultiSignal channels;  // channels[c][n], full-scale = 1.0
    WavEncoding encoding = WavEncoding::Float32;
};

/// Reads 16-bit PCM or 32-bit IEEE float RIFF/WAVE, including the
/// WAVE_FORMAT_EXTENSIBLE wrapper. Throws ErrorCode::Io / ErrorCode::Format.
WavData read_wav(const std::filesystem::path& path);

/// Writes interleaved little-endian samples. Pcm16 clips to [-1, 1).
void write_wav(const std::filesystem::path& path, const MultiSignal& channels,
               double sample_rate, WavEncoding encoding = WavEncoding::Float32);

}  // namespace ucabank
