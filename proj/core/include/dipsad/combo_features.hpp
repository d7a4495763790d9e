/*
Copyright 2026 The dipsad Authors. All rights reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
// Per-frame voicing features and their projection to a single "combo" axis.
//
// Five features are computed on each frame:
//   harmonicity      peak normalized autocorrelation over lags 20..200
//   clarity          1 - min normalized AMDF over the same lags
//   prediction_gain  10 log10(frame energy / order-10 LPC residual energy), >= 0
//   periodicity      harmonicity of the LPC residual
//   spectral_flux    L2 distance between consecutive unit-norm magnitude spectra
// Zero-energy frames get all five set to 0.

#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "dipsad/audio_io.hpp"

namespace dipsad {

inline constexpr std::size_t kNumFeatures = 5;
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "harmonicity", "clarity", "prediction_gain", "periodicity", "spectral_flux"};

using FeatureRow = std::array<double, kNumFeatures>;

struct RawFeatureMatrix {
  std::vector<FeatureRow> rows;
  std::vector<double> frame_times;  // frame start, seconds
  bool degenerate = false;          // set by mvn_normalize when N < 2

  std::size_t size() const { return rows.size(); }
};

struct ComboVector {
  std::vector<double> values;
  std::vector<double> frame_times;
  FeatureRow direction{};  // unit loading vector of the projection
  double eigenvalue = 0.0;
  bool degenerate = false;  // rank-0 input
};

// Lag search range for the pitch-style features, in samples at 8 kHz.
inline constexpr std::size_t kMinLag = 20;
inline constexpr std::size_t kMaxLag = 200;
inline constexpr int kLpcOrder = 10;

// Single-frame features (spectral flux needs a neighbour and is computed in
// extract_raw_features).
double harmonicity(std::span<const double> frame);
double clarity(std::span<const double> frame);
double prediction_gain(std::span<const double> frame);
double periodicity(std::span<const double> frame);

// Residual of an order-p autocorrelation LPC fit; length equals the frame,
// with the first p samples set to zero.
std::vector<double> lpc_residual(std::span<const double> frame, int order = kLpcOrder);

RawFeatureMatrix extract_raw_features(const FrameSequence& frames);

// log of mean frame power, with a floor so silence is finite.
std::vector<double> frame_log_energy(const FrameSequence& frames);

// Per-column zero mean, unit (population) variance. Constant columns become 0.
RawFeatureMatrix mvn_normalize(const RawFeatureMatrix& m);

// Projection onto the leading eigenvector of the (population) covariance.
// Orientation: non-negative correlation with `log_energy` when that is given
// and non-constant; otherwise the largest-magnitude loading is positive.
ComboVector pca_first_component(const RawFeatureMatrix& normalized,
                                std::span<const double> log_energy = {});

// time, five features, combo; one row per frame with a header line.
void write_feature_tsv(std::ostream& out, const RawFeatureMatrix& raw,
                       const ComboVector& combo);

}  // namespace dipsad
