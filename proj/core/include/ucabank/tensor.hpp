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

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ucabank {

using cplx = std::complex<double>;

/// Dense row-major rank-3 tensor. Index order is (outer, middle, inner), e.g.
/// (channel, frame, bin) for spectrograms.
template <typename T>
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(std::size_t d0, std::size_t d1, std::size_t d2, T fill = T{})
        : dims_{d0, d1, d2}, data_(d0 * d1 * d2, fill) {}

    std::size_t dim(std::size_t axis) const { return dims_[axis]; }
    const std::array<std::size_t, 3>& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * dims_[1] + j) * dims_[2] + k];
    }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * dims_[1] + j) * dims_[2] + k];
    }

    /// Contiguous innermost row at (i, j).
    std::span<T> row(std::size_t i, std::size_t j) {
        return {data_.data() + (i * dims_[1] + j) * dims_[2], dims_[2]};
    }
    std::span<const T> row(std::size_t i, std::size_t j) const {
        return {data_.data() + (i * dims_[1] + j) * dims_[2], dims_[2]};
    }

    std::vector<T>& values() { return data_; }
    const std::vector<T>& values() const { return data_; }

    bool same_shape(const Tensor3& other) const { return dims_ == other.dims_; }

private:
    std::array<std::size_t, 3> dims_{0, 0, 0};
    std::vector<T> data_;
};

using ComplexTensor = Tensor3<cplx>;
using RealTensor = Tensor3<double>;

}  // namespace ucabank
