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

#include "ucabank/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "ucabank/error.hpp"

namespace ucabank {
namespace {

constexpr double kSeriesLimit = 12.0;

// Ascending series sum_k (-1)^k (x/2)^(2k+n) / (k! (n+k)!), n >= 0.
double series_jn(int n, double x) {
    const long double half = static_cast<long double>(x) / 2.0L;
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i) term *= half / static_cast<long double>(i);
    if (term == 0.0L) return 0.0;

    const long double q = -half * half;
    long double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * static_cast<long double>(n + k));
        sum += term;
        if (std::fabs(term) < 1e-21L * std::max(std::fabs(sum), 1e-300L) && k > half) break;
    }
    return static_cast<double>(sum);
}

// Miller backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1} from a high even
// start order, normalized with J_0 + 2 * sum_{k>=1} J_{2k} = 1.
double miller_jn(int n, double x) {
    const double top = std::max(static_cast<double>(n), x);
    int start = static_cast<int>(top + 20.0 + std::sqrt(60.0 * top));
    start += start % 2;

    constexpr double kRescale = 1e250;
    double next = 0.0;      // J_{k+1}
    double current = 1e-30; // J_k
    double wanted = 0.0;
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        const double prev = (2.0 * k / x) * current - next;
        next = current;
        current = prev;
        if (std::fabs(current) > kRescale) {
            current /= kRescale;
            next /= kRescale;
            wanted /= kRescale;
            norm /= kRescale;
        }
        // current now holds J_{k-1}
        if (k - 1 == n) wanted = current;
        if (k - 1 > 0 && (k - 1) % 2 == 0) norm += 2.0 * current;
    }
    norm += current;
    return wanted / norm;
}

}  // namespace

double bessel_jn(int order, double x) {
    if (std::abs(order) > kBesselMaxOrder || !(x >= 0.0) || x > kBesselMaxArgument) {
        fail(ErrorCode::DomainError, "bessel_jn outside envelope: n=" + std::to_string(order) +
                                         " x=" + std::to_string(x));
    }
    const int n = std::abs(order);
    const double value = x < kSeriesLimit ? series_jn(n, x) : miller_jn(n, x);
    return (order < 0 && (n % 2 == 1)) ? -value : value;
}

}  // namespace ucabank
