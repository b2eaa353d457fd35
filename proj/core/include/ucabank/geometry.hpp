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
#include <numbers>
#include <vector>

#include "ucabank/tensor.hpp"

namespace ucabank {

inline constexpr double kDefaultSoundSpeed = 343.0;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform circular array in the horizontal plane. Sensor m (0-based) sits at
/// azimuth 2*pi*m/M, so the first sensor is on the reference axis.
class UcaGeometry {
public:
    std::size_t num_mics() const { return azimuths_.size(); }
    double radius() const { return radius_; }
    double sound_speed() const { return sound_speed_; }
    const std::vector<double>& sensor_azimuths() const { return azimuths_; }

    bool operator==(const UcaGeometry&) const = default;

private:
    friend UcaGeometry make_uca(std::size_t, double, double);
    UcaGeometry(std::vector<double> azimuths, double radius, double sound_speed)
        : azimuths_(std::move(azimuths)), radius_(radius), sound_speed_(sound_speed) {}

    std::vector<double> azimuths_;
    double radius_ = 0.0;
    double sound_speed_ = kDefaultSoundSpeed;
};

/// Far-field plane-wave phase delays across the array for one (frequency, azimuth).
struct SteeringVector {
    std::vector<cplx> entries;
    double frequency_rad = 0.0;  // angular frequency, rad/s
    double azimuth = 0.0;
};

UcaGeometry make_uca(std::size_t num_mics, double radius_m,
                     double sound_speed = kDefaultSoundSpeed);

/// omega * r / c for omega = 2*pi*f.
double normalized_freq(const UcaGeometry& geom, double freq_hz);

SteeringVector steering_vector(const UcaGeometry& geom, double freq_hz, double azimuth);

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace ucabank
