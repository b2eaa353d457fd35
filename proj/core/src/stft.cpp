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

#include "ucabank/stft.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "ucabank/error.hpp"
#include "ucabank/geometry.hpp"

namespace ucabank {

void StftConfig::validate() const {
    require(std::isfinite(sample_rate_hz) && sample_rate_hz > 0.0, ErrorCode::InvalidArgument,
            "sample rate must be > 0");
    require(win_len >= 2, ErrorCode::InvalidArgument, "window length must be >= 2");
    require(hop >= 1, ErrorCode::InvalidArgument, "hop must be >= 1");
    require(fft_size >= win_len, ErrorCode::InvalidArgument,
            "fft_size (" + std::to_string(fft_size) + ") must be >= win_len (" +
                std::to_string(win_len) + ")");
}

std::vector<double> hamming_window(std::size_t length) {
    require(length >= 2, ErrorCode::InvalidArgument, "Hamming window needs length >= 2");
    std::vector<double> w(length);
    const double denom = static_cast<double>(length - 1);
    for (std::size_t i = 0; i < length; ++i) {
        w[i] = 0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(i) / denom);
    }
    // Exact mirror symmetry; cos rounding otherwise breaks it in the last ulp.
    for (std::size_t i = 0; i < length / 2; ++i) w[length - 1 - i] = w[i];
    return w;
}

Spectrogram stft(const MultiSignal& signal, const StftConfig& cfg) {
    cfg.validate();
    require(!signal.empty(), ErrorCode::ShapeMismatch, "signal has no channels");
    const std::size_t samples = signal.front().size();
    for (const auto& ch : signal) {
        require(ch.size() == samples, ErrorCode::ShapeMismatch,
                "all channels must have the same length");
    }
    require(samples >= cfg.win_len, ErrorCode::TooShortSignal,
            "signal of " + std::to_string(samples) + " samples is shorter than one window (" +
                std::to_string(cfg.win_len) + ")");

    const std::size_t frames = cfg.num_frames(samples);
    const std::size_t bins = cfg.num_bins();
    const auto window = hamming_window(cfg.win_len);

    Spectrogram spec;
    spec.config = cfg;
    spec.num_samples = samples;
    spec.data = ComplexTensor(signal.size(), frames, bins);

    detail::RealFft fft(cfg.fft_size);
    std::vector<double> frame(cfg.win_len);
    for (std::size_t c = 0; c < signal.size(); ++c) {
        const auto& x = signal[c];
        for (std::size_t t = 0; t < frames; ++t) {
            const std::size_t start = t * cfg.hop;
            for (std::size_t n = 0; n < cfg.win_len; ++n) frame[n] = window[n] * x[start + n];
            fft.forward(frame, spec.data.row(c, t));
        }
    }
    return spec;
}

MultiSignal istft(const Spectrogram& spec) {
    const StftConfig& cfg = spec.config;
    cfg.validate();
    require(cfg.hop <= cfg.win_len, ErrorCode::NonCola,
            "hop (" + std::to_string(cfg.hop) + ") exceeds window length (" +
                std::to_string(cfg.win_len) + "); frames do not overlap-add to cover the signal");
    require(spec.bins() == cfg.num_bins(), ErrorCode::ShapeMismatch,
            "spectrogram bin count does not match its configuration");

    const std::size_t frames = spec.frames();
    const std::size_t covered = frames == 0 ? 0 : (frames - 1) * cfg.hop + cfg.win_len;
    const std::size_t length = std::max(spec.num_samples, covered);
    const auto window = hamming_window(cfg.win_len);

    std::vector<double> norm(covered, 0.0);
    for (std::size_t t = 0; t < frames; ++t) {
        for (std::size_t n = 0; n < cfg.win_len; ++n) {
            norm[t * cfg.hop + n] += window[n] * window[n];
        }
    }
    const double peak = norm.empty() ? 0.0 : *std::max_element(norm.begin(), norm.end());
    for (double v : norm) {
        require(v > 1e-12 * peak, ErrorCode::NonCola,
                "summed squared window vanishes inside the signal");
    }

    MultiSignal out(spec.channels(), std::vector<double>(length, 0.0));
    detail::RealFft fft(cfg.fft_size);
    std::vector<double> frame(cfg.fft_size);
    const double scale = 1.0 / static_cast<double>(cfg.fft_size);
    for (std::size_t c = 0; c < spec.channels(); ++c) {
        auto& y = out[c];
        for (std::size_t t = 0; t < frames; ++t) {
            fft.inverse(spec.data.row(c, t), frame);
            const std::size_t start = t * cfg.hop;
            for (std::size_t n = 0; n < cfg.win_len; ++n) {
                y[start + n] += window[n] * frame[n] * scale;
            }
        }
        for (std::size_t n = 0; n < covered; ++n) y[n] /= norm[n];
    }
    if (spec.num_samples > 0 && spec.num_samples < length) {
        for (auto& ch : out) ch.resize(spec.num_samples);
    }
    return out;
}

}  // namespace ucabank
