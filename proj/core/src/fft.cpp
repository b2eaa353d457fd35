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

#include "fft.hpp"

#include <algorithm>
#include <mutex>
#include <new>

namespace ucabank::detail {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

RealFft::RealFft(std::size_t size) : size_(size) {
    const std::size_t bins = size / 2 + 1;
    std::lock_guard lock(planner_mutex());
    real_ = fftw_alloc_real(size);
    spectrum_ = fftw_alloc_complex(bins);
    if (real_ == nullptr || spectrum_ == nullptr) {
        fftw_free(real_);
        fftw_free(spectrum_);
        throw std::bad_alloc();
    }
    const int n = static_cast<int>(size);
    forward_ = fftw_plan_dft_r2c_1d(n, real_, spectrum_, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(n, spectrum_, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_free(real_);
    fftw_free(spectrum_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    std::fill(real_, real_ + size_, 0.0);
    std::copy_n(in.begin(), std::min(in.size(), size_), real_);
    fftw_execute(forward_);
    const std::size_t bins = size_ / 2 + 1;
    for (std::size_t k = 0; k < bins && k < out.size(); ++k) {
        out[k] = {spectrum_[k][0], spectrum_[k][1]};
    }
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    const std::size_t bins = size_ / 2 + 1;
    for (std::size_t k = 0; k < bins; ++k) {
        spectrum_[k][0] = in[k].real();
        spectrum_[k][1] = in[k].imag();
    }
    // A real signal has real DC and Nyquist bins; c2r assumes so.
    fftw_execute(inverse_);
    std::copy_n(real_, std::min(out.size(), size_), out.begin());
}

}  // namespace ucabank::detail
