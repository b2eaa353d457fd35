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

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace ucabank::detail {

// Owns one forward (r2c) and one inverse (c2r) FFTW plan of a fixed size plus
// their aligned buffers. Plans are made with FFTW_ESTIMATE so results do not
// depend on planner timing.
class RealFft {
public:
    explicit RealFft(std::size_t size);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return size_; }

    // Unnormalized forward transform; `out` receives size/2 + 1 bins.
    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    // Unnormalized inverse; caller divides by size().
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

private:
    std::size_t size_;
    double* real_ = nullptr;
    fftw_complex* spectrum_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

}  // namespace ucabank::detail
