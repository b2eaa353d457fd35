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

#include "ucabank/beamdesign.hpp"

#include <cmath>
#include <string>

#include "ucabank/bessel.hpp"
#include "ucabank/error.hpp"

namespace ucabank {
namespace {

// (-j)^n for integer n, exact.
cplx minus_j_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

}  // namespace

bool IdealPattern::is_symmetric(double tol) const {
    for (int n = 1; n <= order; ++n) {
        if (std::fabs(coeff(n) - coeff(-n)) > tol) return false;
    }
    return true;
}

IdealPattern make_pattern(int order, std::vector<double> coefficients) {
    require(order >= 0, ErrorCode::InvalidArgument, "pattern order must be >= 0");
    require(order <= kBesselMaxOrder, ErrorCode::InvalidArgument,
            "pattern order must be <= " + std::to_string(kBesselMaxOrder));
    require(coefficients.size() == static_cast<std::size_t>(2 * order + 1),
            ErrorCode::InvalidArgument,
            "pattern of order " + std::to_string(order) + " needs " +
                std::to_string(2 * order + 1) + " coefficients, got " +
                std::to_string(coefficients.size()));
    for (double b : coefficients) {
        require(std::isfinite(b), ErrorCode::InvalidArgument, "pattern coefficient is not finite");
    }
    return IdealPattern{order, std::move(coefficients)};
}

IdealPattern supercardioid_preset() {
    return IdealPattern{2, {0.1035, 0.242, 0.309, 0.242, 0.1035}};
}

std::optional<IdealPattern> pattern_preset(const std::string& name) {
    if (name == "supercardioid2") return supercardioid_preset();
    return std::nullopt;
}

cplx ideal_beampattern(const IdealPattern& pattern, double azimuth, double steer_azimuth) {
    const double delta = azimuth - steer_azimuth;
    cplx sum{0.0, 0.0};
    for (int n = -pattern.order; n <= pattern.order; ++n) {
        sum += pattern.coeff(n) * std::polar(1.0, n * delta);
    }
    return sum;
}

SpatialFilter design_filter(const UcaGeometry& geom, const IdealPattern& pattern,
                            double steer_azimuth, double freq_hz, const DesignOptions& options) {
    const std::size_t num_mics = geom.num_mics();
    const int order = pattern.order;
    require(num_mics >= static_cast<std::size_t>(2 * order + 1), ErrorCode::InvalidArgument,
            "filter design needs M >= 2N+1 (M=" + std::to_string(num_mics) +
                ", N=" + std::to_string(order) + ")");
    require(std::isfinite(freq_hz) && freq_hz >= 0.0, ErrorCode::InvalidArgument,
            "frequency must be finite and >= 0");
    require(options.bessel_floor > 0.0, ErrorCode::InvalidArgument, "bessel_floor must be > 0");

    SpatialFilter filter;
    filter.freq_hz = freq_hz;
    filter.steer_azimuth = steer_azimuth;
    const double inv_m = 1.0 / static_cast<double>(num_mics);

    if (freq_hz == 0.0) {
        filter.weights.assign(num_mics, cplx{inv_m, 0.0});
        filter.dc_fallback = true;
        return filter;
    }

    const double wbar = normalized_freq(geom, freq_hz);

    // Per-order modal coefficient b_n exp(j n theta_s) / ((-j)^n J_n(wbar)).
    std::vector<cplx> modal(static_cast<std::size_t>(2 * order + 1));
    for (int n = -order; n <= order; ++n) {
        double jn = bessel_jn(n, wbar);
        if (std::fabs(jn) < options.bessel_floor) {
            if (!options.regularize) {
                fail(ErrorCode::DegenerateFrequency,
                     "J_" + std::to_string(n) + "(" + std::to_string(wbar) +
                         ") is within the Bessel floor at " + std::to_string(freq_hz) + " Hz");
            }
            jn = std::signbit(jn) ? -options.bessel_floor : options.bessel_floor;
            filter.regularized = true;
        }
        modal[static_cast<std::size_t>(n + order)] =
            pattern.coeff(n) * std::polar(1.0, n * steer_azimuth) / (minus_j_pow(n) * jn);
    }

    const auto& psi = geom.sensor_azimuths();
    filter.weights.resize(num_mics);
    for (std::size_t m = 0; m < num_mics; ++m) {
        cplx acc{0.0, 0.0};
        for (int n = -order; n <= order; ++n) {
            acc += std::polar(1.0, -n * psi[m]) * modal[static_cast<std::size_t>(n + order)];
        }
        filter.weights[m] = acc * inv_m;
    }
    return filter;
}

cplx filter_response(const SpatialFilter& filter, const SteeringVector& steering) {
    require(filter.weights.size() == steering.entries.size(), ErrorCode::GeometryMismatch,
            "filter has " + std::to_string(filter.weights.size()) +
                " weights but steering vector has " + std::to_string(steering.entries.size()) +
                " entries");
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < filter.weights.size(); ++m) {
        acc += std::conj(filter.weights[m]) * steering.entries[m];
    }
    return acc;
}

}  // namespace ucabank
