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

#include "ucabank/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "ucabank/error.hpp"

namespace ucabank {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xFF));
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open WAV file " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    const std::string where = " in " + path.string();
    require(bytes.size() >= 12 && std::memcmp(bytes.data(), "RIFF", 4) == 0 &&
                std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
            ErrorCode::Format, "not a RIFF/WAVE file" + where);

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const std::uint8_t* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint8_t* chunk = bytes.data() + pos;
        const std::size_t size = get_u32(chunk + 4);
        const std::size_t body = pos + 8;
        const std::size_t available = std::min(size, bytes.size() - body);
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            require(available >= 16, ErrorCode::Format, "truncated fmt chunk" + where);
            const std::uint8_t* f = bytes.data() + body;
            format = get_u16(f);
            channels = get_u16(f + 2);
            rate = get_u32(f + 4);
            bits = get_u16(f + 14);
            if (format == kFormatExtensible) {
                require(available >= 26, ErrorCode::Format, "truncated extensible fmt" + where);
                format = get_u16(f + 24);  // first two bytes of the sub-format GUID
            }
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = available;
        }
        pos = body + size + (size & 1);
    }
    require(channels > 0 && rate > 0, ErrorCode::Format, "missing or invalid fmt chunk" + where);
    require(data != nullptr, ErrorCode::Format, "missing data chunk" + where);

    WavData wav;
    wav.sample_rate = static_cast<double>(rate);
    std::size_t width = 0;
    if (format == kFormatPcm && bits == 16) {
        wav.encoding = WavEncoding::Pcm16;
        width = 2;
    } else if (format == kFormatFloat && bits == 32) {
        wav.encoding = WavEncoding::Float32;
        width = 4;
    } else {
        fail(ErrorCode::Format, "unsupported WAV encoding (format " + std::to_string(format) +
                                    ", " + std::to_string(bits) + " bits)" + where);
    }

    const std::size_t frames = data_size / (width * channels);
    wav.channels.assign(channels, std::vector<double>(frames));
    for (std::size_t n = 0; n < frames; ++n) {
        for (std::size_t c = 0; c < channels; ++c) {
            const std::uint8_t* p = data + (n * channels + c) * width;
            if (width == 2) {
                wav.channels[c][n] = static_cast<std::int16_t>(get_u16(p)) / 32768.0;
            } else {
                wav.channels[c][n] = std::bit_cast<float>(get_u32(p));
            }
        }
    }
    return wav;
}

void write_wav(const std::filesystem::path& path, const MultiSignal& channels,
               double sample_rate, WavEncoding encoding) {
    require(!channels.empty() && channels.size() <= 0xFFFF, ErrorCode::InvalidArgument,
            "WAV needs between 1 and 65535 channels");
    require(sample_rate > 0.0 && sample_rate <= std::numeric_limits<std::uint32_t>::max(),
            ErrorCode::InvalidArgument, "invalid WAV sample rate");
    const std::size_t frames = channels.front().size();
    for (const auto& ch : channels) {
        require(ch.size() == frames, ErrorCode::ShapeMismatch, "WAV channels differ in length");
    }

    const bool is_float = encoding == WavEncoding::Float32;
    const std::uint16_t width = is_float ? 4 : 2;
    const auto num_channels = static_cast<std::uint16_t>(channels.size());
    const std::uint64_t data_bytes64 = static_cast<std::uint64_t>(frames) * num_channels * width;
    require(data_bytes64 < 0xFFFFFF00ULL, ErrorCode::InvalidArgument, "WAV payload exceeds 4 GiB");
    const auto data_bytes = static_cast<std::uint32_t>(data_bytes64);
    const auto rate = static_cast<std::uint32_t>(std::lround(sample_rate));

    std::vector<std::uint8_t> out;
    out.reserve(64 + data_bytes);
    const std::uint32_t fmt_size = is_float ? 18 : 16;
    const std::uint32_t fact_size = is_float ? 12 : 0;
    put_tag(out, "RIFF");
    put_u32(out, 4 + (8 + fmt_size) + fact_size + (8 + data_bytes));
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, fmt_size);
    put_u16(out, is_float ? kFormatFloat : kFormatPcm);
    put_u16(out, num_channels);
    put_u32(out, rate);
    put_u32(out, rate * num_channels * width);
    put_u16(out, static_cast<std::uint16_t>(num_channels * width));
    put_u16(out, static_cast<std::uint16_t>(width * 8));
    if (is_float) {
        put_u16(out, 0);  // cbSize
        put_tag(out, "fact");
        put_u32(out, 4);
        put_u32(out, static_cast<std::uint32_t>(frames));
    }
    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (std::size_t n = 0; n < frames; ++n) {
        for (const auto& ch : channels) {
            if (is_float) {
                put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(ch[n])));
            } else {
                const double scaled = std::clamp(std::round(ch[n] * 32768.0), -32768.0, 32767.0);
                put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
            }
        }
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(file), ErrorCode::Io, "cannot create WAV file " + path.string());
    file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    require(static_cast<bool>(file), ErrorCode::Io, "failed writing WAV file " + path.string());
}

}  // namespace ucabank
