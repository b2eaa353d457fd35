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
#include <optional>
#include <vector>

#include "ucabank/geometry.hpp"
#include "ucabank/stft.hpp"
#include "ucabank/wav.hpp"

namespace ucabank {

/// One propagation path: frequency-flat gain with a pure delay, arriving as a
/// plane wave from `azimuth`. Its transfer function is gain * exp(-j w delay).
struct ImageSource {
    double gain = 1.0;
    double delay_s = 0.0;
    double azimuth = 0.0;  // radians
};

enum class NoiseKind { None, White };

struct Scene {
    std::vector<double> source;       // mono source at the analysis sample rate
    std::vector<ImageSource> images;  // images[0] is conventionally the direct path
    NoiseKind noise_kind = NoiseKind::None;
    double snr_db = 5.0;
    std::uint64_t seed = 0;

    /// Checks: at least one image, delays in [0, 1] s, finite gains,
    /// snr_db in [-20, 60].
    void validate() const;
};

/// Observation of the desired signal at every microphone, built per STFT bin:
/// X_m(k, w) = sum_l gain_l exp(-j w delay_l) S(k, w) zeta_m(w, azimuth_l).
Spectrogram synthesize_desired(const Scene& scene, const UcaGeometry& geom,
                               const StftConfig& cfg);

struct NoisyMixture {
    Spectrogram mixture;
    Spectrogram noise;
    double realized_snr_db = 0.0;
};

/// Sum of |X|^2 over every channel, frame and bin.
double spectral_energy(const Spectrogram& spec);

/// Adds spatially white Gaussian noise (independent per channel, generated in
/// the time domain from a mt19937_64 seeded with `noise_seed`, then analysed
/// with the same STFT) scaled so that total desired energy over total noise
/// energy equals `snr_db`.
NoisyMixture mix_at_snr(const Spectrogram& desired, std::uint64_t noise_seed, double snr_db);

struct SimulationResult {
    Spectrogram desired;
    std::optional<NoisyMixture> noisy;

    const Spectrogram& observed() const { return noisy ? noisy->mixture : desired; }
};

SimulationResult simulate(const Scene& scene, const UcaGeometry& geom, const StftConfig& cfg);

/// istft followed by a WAV write with one channel per microphone.
void render_to_wav(const Spectrogram& spec, const std::filesystem::path& path,
                   WavEncoding encoding = WavEncoding::Float32);

}  // namespace ucabank
