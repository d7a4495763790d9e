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
#include "dipsad/demo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dipsad/error.hpp"

namespace dipsad {

DemoUtterance make_demo_utterance(const DemoOptions& opt) {
  if (!(opt.seconds > 0.0)) throw Error("demo: duration must be positive");
  if (!(opt.min_turn_s > 0.0) || opt.max_turn_s < opt.min_turn_s) {
    throw Error("demo: need 0 < min_turn_s <= max_turn_s");
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> turn(opt.min_turn_s, opt.max_turn_s);
  std::uniform_real_distribution<double> pitch0(110.0, 220.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto total = static_cast<std::size_t>(std::llround(opt.seconds * kAnalysisRate));
  DemoUtterance out;
  out.audio.sample_rate = kAnalysisRate;
  out.audio.samples.assign(total, 0.0);
  out.reference.duration = static_cast<double>(total) / kAnalysisRate;

  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::size_t pos = 0;
  bool voiced = false;
  while (pos < total) {
    const auto len = std::min(total - pos, static_cast<std::size_t>(turn(rng) * kAnalysisRate));
    if (voiced) {
      const double f0 = pitch0(rng);
      double phase = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double t = static_cast<double>(i) / kAnalysisRate;
        const double f = f0 * (1.0 + 0.05 * std::sin(two_pi * 0.7 * t));
        phase += two_pi * f / kAnalysisRate;
        double s = 0.0;
        for (int h = 1; h * f < 3500.0 && h <= 12; ++h) s += std::sin(h * phase) / h;
        const double env = 0.6 + 0.4 * std::sin(two_pi * 4.0 * t);
        out.audio.samples[pos + i] = opt.speech_level * env * s / 2.0;
      }
      out.reference.segments.push_back({static_cast<double>(pos) / kAnalysisRate,
                                        static_cast<double>(pos + len) / kAnalysisRate, true});
    }
    pos += len;
    voiced = !voiced;
  }
  for (double& x : out.audio.samples) {
    x = std::clamp(x + opt.noise_level * gauss(rng), -1.0, 1.0);
  }
  return out;
}

}  // namespace dipsad
