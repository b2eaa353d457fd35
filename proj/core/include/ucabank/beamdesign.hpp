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

#include <optional>
#include <string>
#include <vector>

#include "ucabank/geometry.hpp"

namespace ucabank {

/// Target directivity sum_{n=-N..N} b_n exp(j n (theta - theta_s)).
/// `coefficients[k]` holds b_{k-N}.
struct IdealPattern {
    int order = 0;
    std::vector<double> coefficients{1.0};

    double coeff(int n) const { return coefficients[static_cast<std::size_t>(n + order)]; }
    bool is_symmetric(double tol = 0.0) const;
    bool operator==(const IdealPattern&) const = default;
};

/// Validates length 2N+1 and finiteness.
IdealPattern make_pattern(int order, std::vector<double> coefficients);

/// Second-order supercardioid, b = [0.1035, 0.242, 0.309, 0.242, 0.1035].
IdealPattern supercardioid_preset();

/// Looks up a named preset ("supercardioid2"); std::nullopt when unknown.
std::optional<IdealPattern> pattern_preset(const std::string& name);

struct SpatialFilter {
    std::vector<cplx> weights;
    double freq_hz = 0.0;
    double steer_azimuth = 0.0;
    bool dc_fallback = false;   // uniform averaging filter was returned
    bool regularized = false;   // at least one Bessel denominator was clamped
};

struct DesignOptions {
    bool regularize = true;
    double bessel_floor = 1e-4;
};

cplx ideal_beampattern(const IdealPattern& pattern, double azimuth, double steer_azimuth);

/// Least-squares phase-mode filter
///
///   h_m = (1/M) sum_n b_n exp(j n theta_s) exp(-j n psi_m) / ((-j)^n J_n(wbar))
///
/// whose response h^H d(w, theta) reproduces the ideal pattern up to spatial
/// aliasing of Bessel orders |n| > N.
///
/// Requires M >= 2N+1 (InvalidArgument otherwise). At f = 0 the uniform
/// averaging filter is returned. With `regularize` on, |J_n| is floored at
/// `bessel_floor` keeping its sign; with it off, a denominator below the floor
/// raises DegenerateFrequency.
SpatialFilter design_filter(const UcaGeometry& geom, const IdealPattern& pattern,
                            double steer_azimuth, double freq_hz,
                            const DesignOptions& options = {});

/// h^H d
cplx filter_response(const SpatialFilter& filter, const SteeringVector& steering);

}  // namespace ucabank
