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

#include "ucabank/geometry.hpp"

#include <cmath>
#include <string>

#include "ucabank/error.hpp"

namespace ucabank {

UcaGeometry make_uca(std::size_t num_mics, double radius_m, double sound_speed) {
    require(num_mics >= 1, ErrorCode::InvalidArgument, "num_mics must be >= 1");
    require(std::isfinite(radius_m) && radius_m >= 0.0, ErrorCode::InvalidArgument,
            "radius must be >= 0, got " + std::to_string(radius_m));
    require(std::isfinite(sound_speed) && sound_speed > 0.0, ErrorCode::InvalidArgument,
            "sound speed must be > 0, got " + std::to_string(sound_speed));

    std::vector<double> azimuths(num_mics);
    const double spacing = kTwoPi / static_cast<double>(num_mics);
    for (std::size_t m = 0; m < num_mics; ++m) {
        azimuths[m] = spacing * static_cast<double>(m);
    }
    return UcaGeometry(std::move(azimuths), radius_m, sound_speed);
}

double normalized_freq(const UcaGeometry& geom, double freq_hz) {
    return kTwoPi * freq_hz * geom.radius() / geom.sound_speed();
}

SteeringVector steering_vector(const UcaGeometry& geom, double freq_hz, double azimuth) {
    const double wbar = normalized_freq(geom, freq_hz);
    SteeringVector sv;
    sv.frequency_rad = kTwoPi * freq_hz;
    sv.azimuth = azimuth;
    sv.entries.reserve(geom.num_mics());
    for (double psi : geom.sensor_azimuths()) {
        sv.entries.push_back(std::polar(1.0, wbar * std::cos(azimuth - psi)));
    }
    return sv;
}

}  // namespace ucabank
