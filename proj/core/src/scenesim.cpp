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

#include "ucabank/scenesim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ucabank/error.hpp"

namespace ucabank {

void Scene::validate() const {
    require(!images.empty(), ErrorCode::InvalidArgument, "scene needs at least one image source");
    for (std::size_t l = 0; l < images.size(); ++l) {
        const auto& img = images[l];
        const std::string which = "image " + std::to_string(l);
        require(std::isfinite(img.gain), ErrorCode::InvalidArgument, which + ": gain is not finite");
        require(std::isfinite(img.azimuth), ErrorCode::InvalidArgument,
                which + ": azimuth is not finite");
        require(img.delay_s >= 0.0 && img.delay_s <= 1.0, ErrorCode::InvalidArgument,
                which + ": delay must be within [0, 1] s");
    }
    require(snr_db >= -20.0 && snr_db <= 60.0, ErrorCode::InvalidArgument,
            "snr_db must be within [-20, 60]");
}

Spectrogram synthesize_desired(const Scene& scene, const UcaGeometry& geom,
                               const StftConfig& cfg) {
    scene.validate();
    const Spectrogram source = stft(MultiSignal{scene.source}, cfg);

    const std::size_t mics = geom.num_mics();
    const std::size_t frames = source.frames();
    const std::size_t bins = source.bins();
    Spectrogram out;
    out.config = cfg;
    out.num_samples = source.num_samples;
    out.data = ComplexTensor(mics, frames, bins);

    std::vector<cplx> transfer(mics);
    for (std::size_t f = 0; f < bins; ++f) {
        const double freq = cfg.bin_frequency(f);
        const double omega = kTwoPi * freq;
        std::fill(transfer.begin(), transfer.end(), cplx{0.0, 0.0});
        for (const auto& img : scene.images) {
            const cplx q = img.gain * std::polar(1.0, -omega * img.delay_s);
            const auto d = steering_vector(geom, freq, img.azimuth);
            for (std::size_t m = 0; m < mics; ++m) transfer[m] += q * d.entries[m];
        }
        for (std::size_t m = 0; m < mics; ++m) {
            for (std::size_t k = 0; k < frames; ++k) {
                out.data(m, k, f) = transfer[m] * source.data(0, k, f);
            }
        }
    }
    return out;
}

double spectral_energy(const Spectrogram& spec) {
    double e = 0.0;
    for (const cplx& v : spec.data.values()) e += std::norm(v);
    return e;
}

NoisyMixture mix_at_snr(const Spectrogram& desired, std::uint64_t noise_seed, double snr_db) {
    require(std::isfinite(snr_db), ErrorCode::InvalidArgument, "snr_db must be finite");
    const double desired_energy = spectral_energy(desired);
    require(desired_energy > 0.0, ErrorCode::ZeroEnergy,
            "cannot mix at a target SNR: desired signal has zero energy");

    const StftConfig& cfg = desired.config;
    const std::size_t frames = desired.frames();
    const std::size_t length =
        std::max(desired.num_samples, frames == 0 ? 0 : (frames - 1) * cfg.hop + cfg.win_len);

    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    MultiSignal noise_time(desired.channels(), std::vector<double>(length));
    for (auto& ch : noise_time) {
        for (auto& v : ch) v = gauss(rng);
    }

    NoisyMixture mix;
    mix.noise = stft(noise_time, cfg);
    const double raw_energy = spectral_energy(mix.noise);
    const double gain = std::sqrt(desired_energy / (raw_energy * std::pow(10.0, snr_db / 10.0)));
    for (auto& v : mix.noise.data.values()) v *= gain;

    mix.mixture = desired;
    auto& m = mix.mixture.data.values();
    const auto& n = mix.noise.data.values();
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += n[i];
    mix.realized_snr_db = 10.0 * std::log10(desired_energy / spectral_energy(mix.noise));
    return mix;
}

SimulationResult simulate(const Scene& scene, const UcaGeometry& geom, const StftConfig& cfg) {
    SimulationResult result;
    result.desired = synthesize_desired(scene, geom, cfg);
    if (scene.noise_kind == NoiseKind::White) {
        result.noisy = mix_at_snr(result.desired, scene.seed, scene.snr_db);
    }
    return result;
}

void render_to_wav(const Spectrogram& spec, const std::filesystem::path& path,
                   WavEncoding encoding) {
    write_wav(path, istft(spec), spec.config.sample_rate_hz, encoding);
}

}  // namespace ucabank
