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

#include "ucabank/spatialbank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "ucabank/error.hpp"
#include "ucabank/wav.hpp"

namespace ucabank {

SpatialFilter FilterBank::filter(std::size_t i, std::size_t bin) const {
    SpatialFilter f;
    const auto row = weights.row(i, bin);
    f.weights.assign(row.begin(), row.end());
    f.freq_hz = cfg.bin_frequency(bin);
    f.steer_azimuth = steer_azimuths[i];
    f.dc_fallback = bin == 0;
    return f;
}

FilterBank build_filterbank(const UcaGeometry& geom, const IdealPattern& pattern,
                            std::size_t num_filters, const StftConfig& cfg,
                            const DesignOptions& options) {
    require(num_filters >= 1, ErrorCode::InvalidArgument, "filter bank needs at least one filter");
    cfg.validate();

    const std::size_t bins = cfg.num_bins();
    const std::size_t mics = geom.num_mics();
    FilterBank bank{{}, ComplexTensor(num_filters, bins, mics), geom, pattern, cfg, options};
    bank.steer_azimuths.resize(num_filters);
    for (std::size_t i = 0; i < num_filters; ++i) {
        bank.steer_azimuths[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(num_filters);
    }
    detail::parallel_for(num_filters * bins, [&](std::size_t n) {
        const std::size_t i = n / bins;
        const std::size_t f = n % bins;
        const auto h = design_filter(geom, pattern, bank.steer_azimuths[i], cfg.bin_frequency(f),
                                     options);
        std::copy(h.weights.begin(), h.weights.end(), bank.weights.row(i, f).begin());
    });
    return bank;
}

ComplexTensor apply_filterbank(const FilterBank& bank, const Spectrogram& spec) {
    const std::size_t mics = bank.geom.num_mics();
    require(spec.channels() == mics, ErrorCode::ShapeMismatch,
            "spectrogram has " + std::to_string(spec.channels()) +
                " channels but the filter bank expects " + std::to_string(mics));
    require(spec.config == bank.cfg, ErrorCode::ShapeMismatch,
            "spectrogram STFT configuration differs from the filter bank's");
    require(spec.bins() == bank.cfg.num_bins(), ErrorCode::ShapeMismatch,
            "spectrogram bin count differs from the filter bank's");

    const std::size_t filters = bank.num_filters();
    const std::size_t frames = spec.frames();
    const std::size_t bins = spec.bins();
    ComplexTensor z(filters, frames, bins);
    detail::parallel_for(frames, [&](std::size_t k) {
        for (std::size_t i = 0; i < filters; ++i) {
            const auto out = z.row(i, k);
            for (std::size_t m = 0; m < mics; ++m) {
                const auto x = spec.data.row(m, k);
                for (std::size_t f = 0; f < bins; ++f) {
                    const cplx w = bank.weights(i, f, m);
                    const double re = w.real() * x[f].real() + w.imag() * x[f].imag();
                    const double im = w.real() * x[f].imag() - w.imag() * x[f].real();
                    out[f] += cplx{re, im};
                }
            }
        }
    });
    return z;
}

namespace {

void check_exponent(double exponent) {
    if (!(exponent > 0.0 && exponent <= 1.0)) {
        fail(ErrorCode::InvalidExponent,
             "compression exponent must be in (0, 1], got " + std::to_string(exponent));
    }
}

cplx compress_unchecked(cplx z, double exponent) {
    const double sq = z.real() * z.real() + z.imag() * z.imag();
    double g;
    if (sq >= std::numeric_limits<double>::min() && std::isfinite(sq)) {
        g = std::exp(0.5 * (exponent - 1.0) * std::log(sq));
    } else {
        const double mag = std::hypot(z.real(), z.imag());  // squared magnitude under/overflowed
        if (mag == 0.0) return {0.0, 0.0};
        g = std::pow(mag, exponent - 1.0);
    }
    return {z.real() * g, z.imag() * g};
}

}  // namespace

cplx compress(cplx z, double exponent) {
    check_exponent(exponent);
    return compress_unchecked(z, exponent);
}

ComplexTensor compress(const ComplexTensor& z, double exponent) {
    check_exponent(exponent);
    ComplexTensor out = z;
    for (auto& v : out.values()) v = compress_unchecked(v, exponent);
    return out;
}

FeatureTensor assemble_features(const ComplexTensor& z, double exponent) {
    FeatureTensor features;
    features.compression_exponent = exponent;
    features.data = RealTensor(2 * z.dim(0), z.dim(1), z.dim(2));
    for (std::size_t i = 0; i < z.dim(0); ++i) {
        for (std::size_t k = 0; k < z.dim(1); ++k) {
            for (std::size_t f = 0; f < z.dim(2); ++f) {
                const cplx v = z(i, k, f);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                    fail(ErrorCode::NonFinite, "non-finite filter output at filter " +
                                                   std::to_string(i) + ", frame " +
                                                   std::to_string(k) + ", bin " + std::to_string(f));
                }
                features.data(2 * i, k, f) = v.real();
                features.data(2 * i + 1, k, f) = v.imag();
            }
        }
    }
    return features;
}

ComplexTensor features_to_complex(const FeatureTensor& features) {
    const auto& d = features.data;
    ComplexTensor z(d.dim(0) / 2, d.dim(1), d.dim(2));
    for (std::size_t i = 0; i < z.dim(0); ++i) {
        for (std::size_t k = 0; k < z.dim(1); ++k) {
            for (std::size_t f = 0; f < z.dim(2); ++f) {
                z(i, k, f) = {d(2 * i, k, f), d(2 * i + 1, k, f)};
            }
        }
    }
    return z;
}

FeatureTensor extract_features(const Spectrogram& spec, const FilterBank& bank, double exponent) {
    return assemble_features(compress(apply_filterbank(bank, spec), exponent), exponent);
}

FeatureTensor extract_features(const MultiSignal& signal, const FilterBank& bank,
                               double exponent) {
    return extract_features(stft(signal, bank.cfg), bank, exponent);
}

FeatureTensor extract_features(const std::filesystem::path& wav_path, const UcaGeometry& geom,
                               const IdealPattern& pattern, std::size_t num_filters,
                               const StftConfig& cfg, double exponent,
                               const DesignOptions& options) {
    require(exponent > 0.0 && exponent <= 1.0, ErrorCode::InvalidExponent,
            "compression exponent must be in (0, 1]");
    const WavData wav = read_wav(wav_path);
    require(wav.channels.size() == geom.num_mics(), ErrorCode::ShapeMismatch,
            wav_path.string() + " has " + std::to_string(wav.channels.size()) +
                " channels, array has " + std::to_string(geom.num_mics()) + " microphones");
    require(wav.sample_rate == cfg.sample_rate_hz, ErrorCode::ShapeMismatch,
            wav_path.string() + " is sampled at " + std::to_string(wav.sample_rate) +
                " Hz, configuration expects " + std::to_string(cfg.sample_rate_hz) + " Hz");
    const FilterBank bank = build_filterbank(geom, pattern, num_filters, cfg, options);
    return extract_features(wav.channels, bank, exponent);
}

double relative_l2(const FeatureTensor& a, const FeatureTensor& b) {
    require(a.data.same_shape(b.data), ErrorCode::ShapeMismatch,
            "feature tensors differ in shape");
    double diff = 0.0, na = 0.0, nb = 0.0;
    const auto& va = a.data.values();
    const auto& vb = b.data.values();
    for (std::size_t n = 0; n < va.size(); ++n) {
        const double d = va[n] - vb[n];
        diff += d * d;
        na += va[n] * va[n];
        nb += vb[n] * vb[n];
    }
    const double scale = std::max(na, nb);
    return scale == 0.0 ? 0.0 : std::sqrt(diff / scale);
}

}  // namespace ucabank
