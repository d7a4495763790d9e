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
// Rational-ratio polyphase resampler. Output sample m sits at input time
// t = m * M / L; its value is a Kaiser-windowed sinc interpolation of the
// input around t. Since t mod 1 only takes L distinct values the taps are
// tabulated once per phase.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "dipsad/audio_io.hpp"
#include "dipsad/error.hpp"

namespace dipsad {
namespace {

constexpr double kCutoffHz = 3600.0;
constexpr double kKaiserBeta = 8.0;
constexpr int kZeroCrossings = 24;

double bessel_i0(double x) {
  // Power series; converges quickly for the beta used here.
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (k * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

AudioBuffer resample_to_8k(const AudioBuffer& buf) {
  if (buf.sample_rate < kAnalysisRate) {
    throw Error("resample_to_8k: input rate " + std::to_string(buf.sample_rate) +
                " Hz is below 8000 Hz; upsampling is not supported");
  }
  if (buf.sample_rate == kAnalysisRate) return buf;

  const long g = std::gcd(static_cast<long>(kAnalysisRate), static_cast<long>(buf.sample_rate));
  const long L = kAnalysisRate / g;
  const long M = buf.sample_rate / g;

  // Cutoff in cycles per input sample, and the filter half-width in input
  // samples spanning kZeroCrossings lobes.
  const double fc = kCutoffHz / buf.sample_rate;
  const double half_width = kZeroCrossings / (2.0 * fc);
  const long reach = static_cast<long>(std::ceil(half_width));
  const double i0_beta = bessel_i0(kKaiserBeta);

  // Phase p: output time offset p / L past an integer input index.
  // Taps cover input indices base - reach + 1 .. base + reach.
  const long taps = 2 * reach;
  std::vector<double> table(static_cast<std::size_t>(L * taps));
  for (long p = 0; p < L; ++p) {
    const double frac = static_cast<double>(p) / L;
    double* row = table.data() + p * taps;
    double sum = 0.0;
    for (long k = 0; k < taps; ++k) {
      const double u = frac - static_cast<double>(k - reach + 1);  // t - n
      const double r = u / half_width;
      double w = 0.0;
      if (std::abs(r) < 1.0) {
        w = bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) / i0_beta;
      }
      row[k] = 2.0 * fc * sinc(2.0 * fc * u) * w;
      sum += row[k];
    }
    for (long k = 0; k < taps; ++k) row[k] /= sum;  // unit DC gain per phase
  }

  const auto n_in = static_cast<long>(buf.samples.size());
  const long n_out = (n_in * L + M - 1) / M;
  AudioBuffer out;
  out.sample_rate = kAnalysisRate;
  out.samples.resize(static_cast<std::size_t>(n_out));
  for (long m = 0; m < n_out; ++m) {
    const long pos = m * M;
    const long base = pos / L;
    const double* row = table.data() + (pos % L) * taps;
    const long first = base - reach + 1;
    const long k0 = std::max(0L, -first);
    const long k1 = std::min(taps, n_in - first);
    double acc = 0.0;
    for (long k = k0; k < k1; ++k) acc += row[k] * buf.samples[static_cast<std::size_t>(first + k)];
    out.samples[static_cast<std::size_t>(m)] = std::clamp(acc, -1.0, 1.0);
  }
  return out;
}

}  // namespace dipsad
