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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ucabank/beamdesign.hpp"
#include "ucabank/geometry.hpp"
#include "ucabank/scenesim.hpp"
#include "ucabank/spatialbank.hpp"

namespace ucabank {

inline constexpr double kMagnitudeFloorDb = -80.0;
inline constexpr std::size_t kDefaultGridSize = 360;

struct BeampatternSample {
    double azimuth = 0.0;  // radians
    cplx response;
    double magnitude_db = kMagnitudeFloorDb;
};

/// 20 log10 |z|, floored at -80 dB.
double magnitude_db(cplx z);

/// `size` azimuths 2*pi*j/size, j = 0..size-1 (1 degree spacing for 360).
std::vector<double> azimuth_grid(std::size_t size = kDefaultGridSize);

/// Response h^H d(w, theta_j) at each grid azimuth. The filter must have one
/// weight per microphone and have been designed at `freq_hz`
/// (GeometryMismatch otherwise).
std::vector<BeampatternSample> realized_beampattern(const SpatialFilter& filter,
                                                    const UcaGeometry& geom, double freq_hz,
                                                    const std::vector<double>& azimuth_grid);

enum class DeviationMode { Complex, Magnitude };

struct Deviation {
    double max_abs = 0.0;
    double mean_abs = 0.0;
};

/// Pointwise |a_j - b_j| (or ||a_j| - |b_j|| in magnitude mode) summarized.
Deviation pattern_deviation(const std::vector<BeampatternSample>& a,
                            const std::vector<BeampatternSample>& b,
                            DeviationMode mode = DeviationMode::Complex);

struct GeometryKey {
    std::size_t num_mics = 0;
    double radius_m = 0.0;
    bool operator==(const GeometryKey&) const = default;
};

struct PairDeviation {
    GeometryKey first;
    GeometryKey second;
    Deviation deviation;
};

struct InvarianceReport {
    std::vector<PairDeviation> pairs;
    double frequency_hz = 0.0;
    double steer_azimuth = 0.0;
    DeviationMode mode = DeviationMode::Complex;
    double max_abs_deviation = 0.0;   // over all pairs and grid points
    double mean_abs_deviation = 0.0;  // over all pairs and grid points
    std::optional<double> feature_rel_l2;
};

/// Designs the filter for each geometry at (steer, freq), evaluates it on a
/// uniform grid, and compares every unordered pair.
InvarianceReport invariance_report(const std::vector<UcaGeometry>& geoms,
                                   const IdealPattern& pattern, double steer_azimuth,
                                   double freq_hz, std::size_t grid_size = kDefaultGridSize,
                                   const DesignOptions& options = {},
                                   DeviationMode mode = DeviationMode::Complex);

std::string report_to_json(const InvarianceReport& report);

/// Relative L2 bound on features of the same noiseless scene seen through two
/// array geometries.
inline constexpr double kFeatureInvarianceTolerance = 0.1;

struct FeaturePairError {
    GeometryKey first;
    GeometryKey second;
    double rel_l2 = 0.0;
};

/// Renders the noiseless part of `scene` for every geometry, extracts features
/// with an I-filter bank, and returns relative_l2 for every unordered pair.
/// `patterns` holds one pattern shared by all geometries, or one per geometry.
std::vector<FeaturePairError> feature_invariance(const Scene& scene,
                                                 const std::vector<UcaGeometry>& geoms,
                                                 const std::vector<IdealPattern>& patterns,
                                                 std::size_t num_filters, const StftConfig& cfg,
                                                 double exponent = kDefaultCompression,
                                                 const DesignOptions& options = {});

enum class ExportFormat { Csv, Json };

/// Columns azimuth_deg, real, imag, magnitude_db at 9 significant digits,
/// sorted by azimuth. The JSON export holds the same rounded values.
void export_beampattern(const std::vector<BeampatternSample>& samples,
                        const std::filesystem::path& path, ExportFormat format);

/// Reads a CSV written by export_beampattern.
std::vector<BeampatternSample> read_beampattern_csv(const std::filesystem::path& path);

/// beampattern_M{M}_r{mm}mm_f{Hz}.csv (or .json)
std::string beampattern_filename(const UcaGeometry& geom, double freq_hz,
                                 ExportFormat format = ExportFormat::Csv);

}  // namespace ucabank
