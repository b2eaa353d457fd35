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

#include <filesystem>
#include <vector>

#include "ucabank/beamdesign.hpp"
#include "ucabank/geometry.hpp"
#include "ucabank/stft.hpp"

namespace ucabank {

inline constexpr std::size_t kDefaultNumFilters = 9;
inline constexpr double kDefaultCompression = 0.3;

/// I beamformers steered at 2*pi*i/I, i = 0..I-1, designed per STFT bin.
struct FilterBank {
    std::vector<double> steer_azimuths;
    ComplexTensor weights;  // (filter, bin, mic)
    UcaGeometry geom;
    IdealPattern pattern;
    StftConfig cfg;
    DesignOptions options;

    std::size_t num_filters() const { return steer_azimuths.size(); }
    /// Weights of filter `i` at `bin` as a SpatialFilter.
    SpatialFilter filter(std::size_t i, std::size_t bin) const;
};

/// Model-ready features, data(channel, frame, bin) with channel 2i = Re(Z'_i)
/// and 2i+1 = Im(Z'_i).
struct FeatureTensor {
    RealTensor data;
    double compression_exponent = kDefaultCompression;

    std::size_t num_filters() const { return data.dim(0) / 2; }
};

FilterBank build_filterbank(const UcaGeometry& geom, const IdealPattern& pattern,
                            std::size_t num_filters, const StftConfig& cfg,
                            const DesignOptions& options = {});

/// Z[i][k][f] = h_i(f)^H y(k, f). Output shape (filter, frame, bin).
ComplexTensor apply_filterbank(const FilterBank& bank, const Spectrogram& spec);

/// |z|^c exp(j angle z); zero stays zero. Requires 0 < c <= 1.
cplx compress(cplx z, double exponent);
ComplexTensor compress(const ComplexTensor& z, double exponent);

FeatureTensor assemble_features(const ComplexTensor& z_compressed,
                                double exponent = kDefaultCompression);

/// Inverse of assemble_features' layout: (filter, frame, bin) complex values.
ComplexTensor features_to_complex(const FeatureTensor& features);

/// stft -> apply_filterbank -> compress -> assemble_features
FeatureTensor extract_features(const MultiSignal& signal, const FilterBank& bank,
                               double exponent = kDefaultCompression);
FeatureTensor extract_features(const Spectrogram& spec, const FilterBank& bank,
                               double exponent = kDefaultCompression);
FeatureTensor extract_features(const std::filesystem::path& wav_path, const UcaGeometry& geom,
                               const IdealPattern& pattern, std::size_t num_filters,
                               const StftConfig& cfg, double exponent = kDefaultCompression,
                               const DesignOptions& options = {});

/// ||a - b|| / max(||a||, ||b||); 0 when both are zero. Shapes must match.
double relative_l2(const FeatureTensor& a, const FeatureTensor& b);

}  // namespace ucabank
