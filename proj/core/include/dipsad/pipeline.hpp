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
// Audio -> frames -> combo feature -> speech labels, for one utterance.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dipsad/audio_io.hpp"
#include "dipsad/combo_features.hpp"
#include "dipsad/dip_cluster.hpp"
#include "dipsad/gmm.hpp"
#include "dipsad/scoring.hpp"

namespace dipsad {

enum class Backend { dip, gmm };

const char* to_string(Backend b);
Backend parse_backend(std::string_view name);

struct PipelineOptions {
  Backend backend = Backend::dip;
  ModeOptions modes;
  GmmOptions gmm;
  bool smooth = false;
  std::size_t smooth_radius = 5;
  double win_ms = 40.0;
  double hop_ms = 10.0;
};

struct Detection {
  std::vector<std::uint8_t> labels;
  std::optional<ModeResult> modes;     // dip backend only
  std::optional<ClusterSet> clusters;  // dip backend only
  std::optional<Gmm1d> gmm;            // gmm backend, or the dip fallback
  int speech_cluster = -1;
  bool fallback_used = false;
};

// Decision stage on an already computed combo stream.
Detection detect_on_combo(std::span<const double> combo, const PipelineOptions& opt);

struct UtteranceResult {
  std::string id;
  double duration = 0.0;
  FrameGrid grid;
  RawFeatureMatrix raw;
  ComboVector combo;
  Detection detection;
  bool degenerate = false;  // no complete frame; everything non-speech
};

UtteranceResult process_audio(const AudioBuffer& audio, const PipelineOptions& opt,
                              std::string id = {});

}  // namespace dipsad
