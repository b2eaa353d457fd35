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

#include "ucabank/error.hpp"

namespace ucabank {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::DomainError: return "domain-error";
        case ErrorCode::DegenerateFrequency: return "degenerate-frequency";
        case ErrorCode::TooShortSignal: return "too-short-signal";
        case ErrorCode::NonCola: return "non-cola";
        case ErrorCode::ShapeMismatch: return "shape-mismatch";
        case ErrorCode::InvalidExponent: return "invalid-exponent";
        case ErrorCode::NonFinite: return "non-finite";
        case ErrorCode::ZeroEnergy: return "zero-energy-desired";
        case ErrorCode::GeometryMismatch: return "geometry-mismatch";
        case ErrorCode::Io: return "io-error";
        case ErrorCode::Format: return "format-error";
    }
    return "unknown";
}

}  // namespace ucabank
