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

#include <random>

#include "test_util.hpp"

using namespace ucabank;
using doctest::Approx;

TEST_CASE("filter bank shape and steering set") {
    const auto bank = build_filterbank(make_uca(5, 0.005), supercardioid_preset(), 9, StftConfig{});
    CHECK(bank.weights.dim(0) == 9);
    CHECK(bank.weights.dim(1) == 201);
    CHECK(bank.weights.dim(2) == 5);
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(bank.steer_azimuths[i] == Approx(2 * oracle::kPi * i / 9.0));
    }
    const auto one = build_filterbank(make_uca(5, 0.005), supercardioid_preset(), 1, StftConfig{});
    CHECK(one.steer_azimuths == std::vector<double>{0.0});
    CHECK_ERROR_CODE(build_filterbank(make_uca(5, 0.005), supercardioid_preset(), 0, StftConfig{}),
                     ErrorCode::InvalidArgument);
    CHECK_ERROR_CODE(build_filterbank(make_uca(4, 0.005), supercardioid_preset(), 9, StftConfig{}),
                     ErrorCode::InvalidArgument);
}

TEST_CASE("bank rows are the per-bin designs") {
    const auto geom = make_uca(7, 0.01);
    const StftConfig cfg;
    const auto bank = build_filterbank(geom, supercardioid_preset(), 4, cfg);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t f : {0u, 1u, 57u, 200u}) {
            const auto h = design_filter(geom, supercardioid_preset(), bank.steer_azimuths[i],
                                         cfg.bin_frequency(f));
            const auto row = bank.filter(i, f);
            CHECK(row.weights == h.weights);
            CHECK(row.dc_fallback == (f == 0));
        }
    }
}

TEST_CASE("applying the bank") {
    const auto geom = make_uca(5, 0.005);
    const StftConfig cfg;
    const auto bank = build_filterbank(geom, supercardioid_preset(), 9, cfg);

    SUBCASE("zero input") {
        const auto z = apply_filterbank(bank, stft(MultiSignal(5, std::vector<double>(1200)), cfg));
        for (const auto& v : z.values()) CHECK(v == std::complex<double>(0.0, 0.0));
    }
    SUBCASE("plane wave from a steering direction passes unchanged") {
        Scene s;
        s.source = oracle::gaussian_noise(4000, 77);
        s.images = {{1.0, 0.0, bank.steer_azimuths[3]}};
        const auto x = synthesize_desired(s, geom, cfg);
        const auto src = stft(MultiSignal{s.source}, cfg);
        const auto z = apply_filterbank(bank, x);
        double diff = 0.0, norm = 0.0;
        for (std::size_t k = 0; k < z.dim(1); ++k) {
            for (std::size_t f = 1; f < z.dim(2); ++f) {
                diff += std::norm(z(3, k, f) - src.data(0, k, f));
                norm += std::norm(src.data(0, k, f));
            }
        }
        CHECK(std::sqrt(diff / norm) < props::kAliasingTolerance);
    }
    SUBCASE("conjugating weights and observations conjugates the output") {
        std::mt19937_64 rng(10);
        const auto spec = stft(props::random_signal(rng, 5, 1000), cfg);
        auto cspec = spec;
        for (auto& v : cspec.data.values()) v = std::conj(v);
        auto cbank = bank;
        for (auto& v : cbank.weights.values()) v = std::conj(v);
        const auto a = apply_filterbank(bank, spec);
        const auto b = apply_filterbank(cbank, cspec);
        for (std::size_t n = 0; n < a.values().size(); ++n) {
            CHECK(std::abs(b.values()[n] - std::conj(a.values()[n])) <= 1e-12 * (1.0 + std::abs(a.values()[n])));
        }
    }
    SUBCASE("shape checks") {
        CHECK_ERROR_CODE(apply_filterbank(bank, stft(MultiSignal(4, std::vector<double>(800)), cfg)),
                         ErrorCode::ShapeMismatch);
        StftConfig other;
        other.hop = 200;
        CHECK_ERROR_CODE(apply_filterbank(bank, stft(MultiSignal(5, std::vector<double>(800)), other)),
                         ErrorCode::ShapeMismatch);
    }
}

TEST_CASE("compression law") {
    CHECK(compress(std::complex<double>(0.0, 0.0), 0.3) == std::complex<double>(0.0, 0.0));
    const auto unit = std::polar(1.0, 2.1);
    CHECK(std::abs(compress(unit, 0.3) - unit) < 1e-15);
    const auto z = compress(std::polar(8.0, -0.7), 0.3);
    CHECK(std::abs(z) == Approx(1.8661).epsilon(1e-4));
    CHECK(std::arg(z) == Approx(-0.7));
    CHECK(compress(std::complex<double>(1e-200, 0.0), 0.3).real() == Approx(std::pow(1e-200, 0.3)));
    CHECK(compress(std::complex<double>(3.0, -4.0), 1.0) == std::complex<double>(3.0, -4.0));
    CHECK_ERROR_CODE(compress(unit, 0.0), ErrorCode::InvalidExponent);
    CHECK_ERROR_CODE(compress(unit, 1.5), ErrorCode::InvalidExponent);
    CHECK_ERROR_CODE(compress(ComplexTensor(1, 1, 1), -0.3), ErrorCode::InvalidExponent);
    CHECK_PROPERTY(props::compression_invertibility());
}

TEST_CASE("feature layout") {
    ComplexTensor z(2, 1, 3);
    z(0, 0, 1) = {1.0, 2.0};
    z(1, 0, 2) = {-3.0, 0.5};
    const auto f = assemble_features(z, 0.3);
    CHECK(f.data.dim(0) == 4);
    CHECK(f.data(0, 0, 1) == 1.0);
    CHECK(f.data(1, 0, 1) == 2.0);
    CHECK(f.data(2, 0, 2) == -3.0);
    CHECK(f.data(3, 0, 2) == 0.5);
    CHECK(features_to_complex(f).values() == z.values());

    ComplexTensor real_only(3, 2, 2);
    for (auto& v : real_only.values()) v = {1.5, 0.0};
    const auto fr = assemble_features(real_only, 0.3);
    for (std::size_t c = 1; c < 6; c += 2) {
        for (std::size_t k = 0; k < 2; ++k) {
            for (std::size_t b = 0; b < 2; ++b) CHECK(fr.data(c, k, b) == 0.0);
        }
    }
    z(1, 0, 0) = {std::nan(""), 0.0};
    CHECK_ERROR_CODE(assemble_features(z, 0.3), ErrorCode::NonFinite);
}

TEST_CASE("feature extraction") {
    const auto geom = make_uca(5, 0.005);
    const StftConfig cfg;
    const auto bank = build_filterbank(geom, supercardioid_preset(), 9, cfg);

    SUBCASE("silence") {
        const auto f = extract_features(MultiSignal(5, std::vector<double>(2000)), bank, 0.3);
        CHECK(f.data.dim(0) == 18);
        CHECK(f.data.dim(2) == 201);
        for (double v : f.data.values()) CHECK(v == 0.0);
    }
    SUBCASE("doubling the input scales magnitudes by 2^c") {
        std::mt19937_64 rng(12);
        auto x = props::random_signal(rng, 5, 3000);
        const auto a = features_to_complex(extract_features(x, bank, 0.3));
        for (auto& ch : x) {
            for (auto& v : ch) v *= 2.0;
        }
        const auto b = features_to_complex(extract_features(x, bank, 0.3));
        for (std::size_t n = 0; n < a.values().size(); ++n) {
            const double ma = std::abs(a.values()[n]);
            if (ma < 1e-6) continue;
            CHECK(std::abs(b.values()[n]) == Approx(std::pow(2.0, 0.3) * ma).epsilon(1e-9));
        }
    }
    SUBCASE("relative L2") {
        std::mt19937_64 rng(13);
        const auto f = extract_features(props::random_signal(rng, 5, 3000), bank, 0.3);
        CHECK(relative_l2(f, f) == 0.0);
        FeatureTensor zero = f;
        for (auto& v : zero.data.values()) v = 0.0;
        CHECK(relative_l2(f, zero) == Approx(1.0));
        CHECK(relative_l2(zero, zero) == 0.0);
        FeatureTensor other;
        other.data = RealTensor(2, 1, 1);
        CHECK_ERROR_CODE(relative_l2(f, other), ErrorCode::ShapeMismatch);
    }
}

TEST_CASE("features from a WAV file") {
    testutil::TempDir tmp;
    std::mt19937_64 rng(14);
    const auto x = props::random_signal(rng, 5, 3000);
    write_wav(tmp / "x.wav", x, 16000.0);
    const auto geom = make_uca(5, 0.005);
    const auto direct = extract_features(x, build_filterbank(geom, supercardioid_preset(), 9, StftConfig{}), 0.3);
    const auto from_file = extract_features(tmp / "x.wav", geom, supercardioid_preset(), 9, StftConfig{}, 0.3);
    CHECK(relative_l2(direct, from_file) < 1e-6);
    CHECK_ERROR_CODE(extract_features(tmp / "x.wav", make_uca(7, 0.01), supercardioid_preset(), 9,
                                      StftConfig{}, 0.3),
                     ErrorCode::ShapeMismatch);
    write_wav(tmp / "y.wav", x, 48000.0);
    CHECK_ERROR_CODE(extract_features(tmp / "y.wav", geom, supercardioid_preset(), 9, StftConfig{}, 0.3),
                     ErrorCode::ShapeMismatch);
}

TEST_CASE("bank rotation") {
    CHECK_PROPERTY(props::bank_rotation_lattice());
    CHECK_PROPERTY(props::bank_rotation_aliasing());
}

TEST_CASE("features of the acceptance scene match the brute-force route") {
    const auto scene = props::acceptance_scene();
    const auto src = oracle::spectrogram(scene.source, 400, 100);
    std::vector<oracle::Image> images;
    for (const auto& img : scene.images) images.push_back({img.gain, img.delay_s, img.azimuth});
    const auto& b = supercardioid_preset().coefficients;
    const auto za = oracle::scene_features(src, images, 5, 0.005, 343.0, b, 9, 16000.0, 400, 0.3);
    const auto zb = oracle::scene_features(src, images, 9, 0.015, 343.0, b, 9, 16000.0, 400, 0.3);
    const double brute = oracle::rel_l2(za, zb);

    const auto pairs = feature_invariance(scene, {make_uca(5, 0.005), make_uca(9, 0.015)},
                                          {supercardioid_preset()}, 9, StftConfig{}, 0.3);
    REQUIRE(pairs.size() == 1);
    INFO("library ", pairs[0].rel_l2, " brute force ", brute);
    CHECK(std::abs(pairs[0].rel_l2 - brute) < 1e-9);
    CHECK(brute <= kFeatureInvarianceTolerance);
}

TEST_CASE("geometry invariance over the full grid") {
    CHECK_PROPERTY(props::geometry_invariance());
}

TEST_CASE("train and test geometries stay within tau_feat") {
    const std::vector<UcaGeometry> geoms{make_uca(5, 0.005), make_uca(7, 0.01), make_uca(7, 0.015),
                                         make_uca(9, 0.01), make_uca(9, 0.015)};
    for (const auto& p : feature_invariance(props::acceptance_scene(), geoms, {supercardioid_preset()},
                                            9, StftConfig{}, 0.3)) {
        CHECK(p.rel_l2 <= kFeatureInvarianceTolerance);
    }
}
