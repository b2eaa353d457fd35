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

#include "ucabank/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ucabank/error.hpp"

namespace ucabank {
namespace {

constexpr const char* kCsvHeader = "azimuth_deg,real,imag,magnitude_db";

std::string format9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// Rows as the exact strings that go to disk, sorted by azimuth.
std::vector<std::array<std::string, 4>> format_rows(std::vector<BeampatternSample> samples) {
    std::stable_sort(samples.begin(), samples.end(),
                     [](const auto& a, const auto& b) { return a.azimuth < b.azimuth; });
    std::vector<std::array<std::string, 4>> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) {
        rows.push_back({format9(rad_to_deg(s.azimuth)), format9(s.response.real()),
                        format9(s.response.imag()), format9(s.magnitude_db)});
    }
    return rows;
}

nlohmann::json geometry_json(const GeometryKey& g) {
    return {{"num_mics", g.num_mics}, {"radius_m", g.radius_m}};
}

}  // namespace

double magnitude_db(cplx z) {
    const double mag = std::abs(z);
    if (mag <= 0.0) return kMagnitudeFloorDb;
    return std::max(20.0 * std::log10(mag), kMagnitudeFloorDb);
}

std::vector<double> azimuth_grid(std::size_t size) {
    require(size >= 1, ErrorCode::InvalidArgument, "azimuth grid needs at least one point");
    std::vector<double> grid(size);
    for (std::size_t j = 0; j < size; ++j) {
        grid[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(size);
    }
    return grid;
}

std::vector<BeampatternSample> realized_beampattern(const SpatialFilter& filter,
                                                    const UcaGeometry& geom, double freq_hz,
                                                    const std::vector<double>& grid) {
    require(filter.weights.size() == geom.num_mics(), ErrorCode::GeometryMismatch,
            "filter has " + std::to_string(filter.weights.size()) + " weights, geometry has " +
                std::to_string(geom.num_mics()) + " microphones");
    require(std::fabs(filter.freq_hz - freq_hz) <= 1e-9 * std::max(1.0, std::fabs(freq_hz)),
            ErrorCode::GeometryMismatch,
            "filter was designed at " + std::to_string(filter.freq_hz) + " Hz, evaluated at " +
                std::to_string(freq_hz) + " Hz");

    std::vector<BeampatternSample> samples;
    samples.reserve(grid.size());
    for (double theta : grid) {
        const cplx r = filter_response(filter, steering_vector(geom, freq_hz, theta));
        samples.push_back({theta, r, magnitude_db(r)});
    }
    return samples;
}

Deviation pattern_deviation(const std::vector<BeampatternSample>& a,
                            const std::vector<BeampatternSample>& b, DeviationMode mode) {
    require(a.size() == b.size() && !a.empty(), ErrorCode::ShapeMismatch,
            "beampatterns must be non-empty and sampled on the same grid");
    Deviation dev;
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = mode == DeviationMode::Complex
                             ? std::abs(a[j].response - b[j].response)
                             : std::fabs(std::abs(a[j].response) - std::abs(b[j].response));
        dev.max_abs = std::max(dev.max_abs, d);
        sum += d;
    }
    dev.mean_abs = sum / static_cast<double>(a.size());
    return dev;
}

InvarianceReport invariance_report(const std::vector<UcaGeometry>& geoms,
                                   const IdealPattern& pattern, double steer_azimuth,
                                   double freq_hz, std::size_t grid_size,
                                   const DesignOptions& options, DeviationMode mode) {
    require(geoms.size() >= 2, ErrorCode::InvalidArgument,
            "invariance report needs at least two geometries");
    const auto grid = azimuth_grid(grid_size);

    std::vector<std::vector<BeampatternSample>> patterns;
    patterns.reserve(geoms.size());
    for (const auto& g : geoms) {
        const auto h = design_filter(g, pattern, steer_azimuth, freq_hz, options);
        patterns.push_back(realized_beampattern(h, g, freq_hz, grid));
    }

    InvarianceReport report;
    report.frequency_hz = freq_hz;
    report.steer_azimuth = steer_azimuth;
    report.mode = mode;
    double mean_sum = 0.0;
    for (std::size_t i = 0; i < geoms.size(); ++i) {
        for (std::size_t j = i + 1; j < geoms.size(); ++j) {
            const Deviation d = pattern_deviation(patterns[i], patterns[j], mode);
            report.pairs.push_back({{geoms[i].num_mics(), geoms[i].radius()},
                                    {geoms[j].num_mics(), geoms[j].radius()},
                                    d});
            report.max_abs_deviation = std::max(report.max_abs_deviation, d.max_abs);
            mean_sum += d.mean_abs;
        }
    }
    // Every pair shares the grid, so the mean of pair means is the global mean.
    report.mean_abs_deviation = mean_sum / static_cast<double>(report.pairs.size());
    return report;
}

std::vector<FeaturePairError> feature_invariance(const Scene& scene,
                                                 const std::vector<UcaGeometry>& geoms,
                                                 const std::vector<IdealPattern>& patterns,
                                                 std::size_t num_filters, const StftConfig& cfg,
                                                 double exponent, const DesignOptions& options) {
    require(geoms.size() >= 2, ErrorCode::InvalidArgument,
            "feature invariance needs at least two geometries");
    require(patterns.size() == 1 || patterns.size() == geoms.size(), ErrorCode::InvalidArgument,
            "give one pattern for all geometries or one per geometry");

    std::vector<FeatureTensor> features;
    features.reserve(geoms.size());
    for (std::size_t g = 0; g < geoms.size(); ++g) {
        const auto& pattern = patterns.size() == 1 ? patterns.front() : patterns[g];
        const auto bank = build_filterbank(geoms[g], pattern, num_filters, cfg, options);
        features.push_back(extract_features(synthesize_desired(scene, geoms[g], cfg), bank, exponent));
    }

    std::vector<FeaturePairError> errors;
    for (std::size_t i = 0; i < geoms.size(); ++i) {
        for (std::size_t j = i + 1; j < geoms.size(); ++j) {
            errors.push_back({{geoms[i].num_mics(), geoms[i].radius()},
                              {geoms[j].num_mics(), geoms[j].radius()},
                              relative_l2(features[i], features[j])});
        }
    }
    return errors;
}

std::string report_to_json(const InvarianceReport& report) {
    nlohmann::json j;
    j["frequency_hz"] = report.frequency_hz;
    j["steer_deg"] = rad_to_deg(report.steer_azimuth);
    j["mode"] = report.mode == DeviationMode::Complex ? "complex" : "magnitude";
    j["max_abs_deviation"] = report.max_abs_deviation;
    j["mean_abs_deviation"] = report.mean_abs_deviation;
    if (report.feature_rel_l2) j["feature_rel_l2"] = *report.feature_rel_l2;
    auto& pairs = j["geometry_pairs"] = nlohmann::json::array();
    for (const auto& p : report.pairs) {
        pairs.push_back({{"first", geometry_json(p.first)},
                         {"second", geometry_json(p.second)},
                         {"max_abs_deviation", p.deviation.max_abs},
                         {"mean_abs_deviation", p.deviation.mean_abs}});
    }
    return j.dump();
}

void export_beampattern(const std::vector<BeampatternSample>& samples,
                        const std::filesystem::path& path, ExportFormat format) {
    require(!samples.empty(), ErrorCode::InvalidArgument, "no beampattern samples to export");
    const auto rows = format_rows(samples);
    std::ofstream out(path, std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot create " + path.string());

    if (format == ExportFormat::Csv) {
        out << kCsvHeader << '\n';
        for (const auto& r : rows) out << r[0] << ',' << r[1] << ',' << r[2] << ',' << r[3] << '\n';
    } else {
        nlohmann::json j;
        j["columns"] = {"azimuth_deg", "real", "imag", "magnitude_db"};
        auto& arr = j["samples"] = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back({{"azimuth_deg", std::strtod(r[0].c_str(), nullptr)},
                           {"real", std::strtod(r[1].c_str(), nullptr)},
                           {"imag", std::strtod(r[2].c_str(), nullptr)},
                           {"magnitude_db", std::strtod(r[3].c_str(), nullptr)}});
        }
        out << j.dump(1) << '\n';
    }
    require(static_cast<bool>(out), ErrorCode::Io, "failed writing " + path.string());
}

std::vector<BeampatternSample> read_beampattern_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
    std::string line;
    require(static_cast<bool>(std::getline(in, line)) && line == kCsvHeader, ErrorCode::Format,
            "unexpected beampattern CSV header in " + path.string());
    std::vector<BeampatternSample> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 4> v{};
        std::istringstream row(line);
        std::string cell;
        for (std::size_t c = 0; c < 4; ++c) {
            require(static_cast<bool>(std::getline(row, cell, ',')), ErrorCode::Format,
                    "short beampattern CSV row in " + path.string());
            char* end = nullptr;
            v[c] = std::strtod(cell.c_str(), &end);
            require(end != cell.c_str(), ErrorCode::Format, "bad number '" + cell + "'");
        }
        samples.push_back({deg_to_rad(v[0]), {v[1], v[2]}, v[3]});
    }
    return samples;
}

std::string beampattern_filename(const UcaGeometry& geom, double freq_hz, ExportFormat format) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "beampattern_M%zu_r%gmm_f%g.%s", geom.num_mics(),
                  geom.radius() * 1000.0, freq_hz, format == ExportFormat::Csv ? "csv" : "json");
    return buf;
}

}  // namespace ucabank
