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
// Synthetic test utterances: voiced harmonic bursts over broadband noise,
// with the matching reference segmentation.
#pragma once

#include <cstdint>

#include "dipsad/audio_io.hpp"
#include "dipsad/scoring.hpp"

namespace dipsad {

struct DemoOptions {
  double seconds = 30.0;
  std::uint64_t seed = 1;
  double noise_level = 0.02;   // rms of the background noise
  double speech_level = 0.25;  // peak of the voiced bursts
  double min_turn_s = 2.0;
  double max_turn_s = 6.0;
};

struct DemoUtterance {
  AudioBuffer audio;  // 8 kHz
  SegmentList reference;
};

// Alternates noise-only and voiced turns of random length, starting with
// noise. Voiced turns are a harmonic series with a slowly drifting pitch in
// 110-220 Hz and a 4 Hz syllabic envelope.
DemoUtterance make_demo_utterance(const DemoOptions& opt = {});

}  // namespace dipsad
