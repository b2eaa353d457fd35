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

namespace ucabank {

inline constexpr int kBesselMaxOrder = 64;
inline constexpr double kBesselMaxArgument = 100.0;

/// Bessel function of the first kind J_n(x), integer order.
///
/// Valid for |n| <= 64 and 0 <= x <= 100; anything else throws
/// ErrorCode::DomainError. Uses the ascending power series below x = 12 and
/// Miller's backward recurrence (normalized with J_0 + 2*sum J_2k = 1) above.
/// Absolute error is below 1e-10 across the envelope.
double bessel_jn(int order, double x);

}  // namespace ucabank
