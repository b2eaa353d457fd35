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
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucabank/ucabank.hpp"

namespace ucabank::cli {

/// Raised for anything wrong with the user's inputs; maps to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ArrayParams {
    std::size_t num_mics = 5;
    double radius_m = 0.005;
    double sound_speed = kDefaultSoundSpeed;

    UcaGeometry geometry() const;
};

struct PatternChoice {
    IdealPattern pattern = supercardioid_preset();
    std::string label = "supercardioid2";
};

struct BankParams {
    PatternChoice pattern;
    std::size_t num_filters = kDefaultNumFilters;
    double compression = kDefaultCompression;
    bool regularize = true;

    DesignOptions design_options() const { return {regularize, DesignOptions{}.bessel_floor}; }
};

/// Seeded white-noise stand-in for a source recording.
struct SyntheticSource {
    double duration_s = 2.0;
    std::uint64_t seed = 1;
};

struct SceneParams {
    std::optional<std::filesystem::path> source_wav;
    std::optional<SyntheticSource> source_noise;
    std::vector<ImageSource> images;
    NoiseKind noise_kind = NoiseKind::None;
    double snr_db = 5.0;
    std::uint64_t seed = 0;

    /// Loads (or synthesizes) the source at `cfg`'s sample rate.
    Scene load(const StftConfig& cfg) const;
    nlohmann::json to_json() const;
};

struct GeometryEntry {
    ArrayParams array;
    std::optional<PatternChoice> pattern;  // overrides the bank pattern when set
};

struct Outputs {
    std::filesystem::path design = "filters.sfbf";
    std::filesystem::path features = "features.sfbf";
    std::filesystem::path wav = "scene.wav";
    std::filesystem::path beampattern_dir = ".";
};

/// Everything a subcommand needs. Physical quantities carry unit-suffixed keys
/// in JSON (radius_m, sample_rate_hz, delay_s, azimuth_deg, snr_db).
struct RunConfig {
    ArrayParams array;
    StftConfig stft;
    BankParams bank;
    std::optional<SceneParams> scene;
    std::vector<GeometryEntry> geometries;
    double tau_feat = kFeatureInvarianceTolerance;
    Outputs outputs;

    /// Checks every module precondition; throws ValidationError.
    void validate() const;
};

RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

SceneParams parse_scene(const nlohmann::json& j, const std::filesystem::path& base_dir);
SceneParams load_scene(const std::filesystem::path& path);

/// "supercardioid2" or {"order": N, "coeffs": [...]}
PatternChoice parse_pattern(const nlohmann::json& j);

/// "5:0.005,9:0.015" -> geometries with the given sound speed.
std::vector<GeometryEntry> parse_geometry_list(const std::string& spec, double sound_speed);

void validate_scene(const SceneParams& scene);
void validate_geometry(const ArrayParams& array, const IdealPattern& pattern);

}  // namespace ucabank::cli
