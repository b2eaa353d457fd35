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

#include <cstddef>
#include <vector>

#include "ucabank/tensor.hpp"

namespace ucabank {

/// Channel-major multichannel time signal: signal[channel][sample].
using MultiSignal = std::vector<std::vector<double>>;

/// Analysis parameters. The defaults are a 25 ms Hamming window with a
/// 6.25 ms hop at 16 kHz, i.e. 400/100 samples and 201 one-sided bins.
struct StftConfig {
    double sample_rate_hz = 16000.0;
    std::size_t win_len = 400;
    std::size_t hop = 100;
    std::size_t fft_size = 400;

    std::size_t num_bins() const { return fft_size / 2 + 1; }
    double bin_frequency(std::size_t bin) const {
        return static_cast<double>(bin) * sample_rate_hz / static_cast<double>(fft_size);
    }
    /// Frames produced for a signal of `samples` samples (0 if shorter than a window).
    std::size_t num_frames(std::size_t samples) const {
        return samples < win_len ? 0 : 1 + (samples - win_len) / hop;
    }

    /// Throws InvalidArgument on a malformed configuration.
    void validate() const;

    bool operator==(const StftConfig&) const = default;
};

/// Complex one-sided spectrogram, data(channel, frame, bin).
struct Spectrogram {
    ComplexTensor data;
    StftConfig config;
    std::size_t num_samples = 0;  // length of the time signal it was computed from

    std::size_t channels() const { return data.dim(0); }
    std::size_t frames() const { return data.dim(1); }
    std::size_t bins() const { return data.dim(2); }
};

/// Symmetric Hamming window 0.54 - 0.46 cos(2 pi i / (L - 1)).
std::vector<double> hamming_window(std::size_t length);

/// Windowed one-sided DFT of every frame of every channel.
///
/// Forward transform is unnormalized: X[k] = sum_n w[n] x[n] exp(-j 2 pi k n / N).
/// Per frame, sum_n |w x|^2 = (1/N) (|X_0|^2 + 2 sum_{0<k<N/2} |X_k|^2 + |X_{N/2}|^2)
/// for even N.
Spectrogram stft(const MultiSignal& signal, const StftConfig& cfg);

/// Weighted overlap-add inverse. Each frame is inverse-transformed (divided by
/// N), multiplied by the analysis window, summed, and divided by the summed
/// squared window, so istft(stft(x)) == x wherever a frame covers the sample.
/// Samples past the last frame are zero.
MultiSignal istft(const Spectrogram& spec);

}  // namespace ucabank
