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
#include "dipsad/pipeline.hpp"

#include <string>

#include "dipsad/error.hpp"

namespace dipsad {

const char* to_string(Backend b) { return b == Backend::dip ? "dip" : "gmm"; }

Backend parse_backend(std::string_view name) {
  if (name == "dip") return Backend::dip;
  if (name == "gmm") return Backend::gmm;
  throw Error("unknown backend '" + std::string(name) + "' (expected dip or gmm)");
}

Detection detect_on_combo(std::span<const double> combo, const PipelineOptions& opt) {
  Detection d;
  if (combo.empty()) return d;

  if (opt.backend == Backend::gmm) {
    d.gmm = fit_em(combo, opt.gmm);
    d.labels = gmm_decide(*d.gmm, combo);
  } else {
    const SortedSample s = SortedSample::from_unsorted(combo);
    d.modes = find_modes(s, opt.modes);
    d.clusters = assign_frames(d.modes->intervals, s, combo);
    // Keep the fitted model around for the report when the fallback runs.
    auto fallback = [&](std::span<const double> x) {
      d.gmm = fit_em(x, opt.gmm);
      return gmm_decide(*d.gmm, x);
    };
    SadDecision sd = decide_speech(*d.clusters, combo, fallback);
    d.labels = std::move(sd.labels);
    d.speech_cluster = sd.speech_cluster;
    d.fallback_used = sd.fallback_used;
  }
  if (opt.smooth) d.labels = median_smooth(d.labels, opt.smooth_radius);
  return d;
}

UtteranceResult process_audio(const AudioBuffer& audio, const PipelineOptions& opt,
                              std::string id) {
  UtteranceResult r;
  r.id = std::move(id);
  const AudioBuffer at8k = resample_to_8k(audio);
  r.duration = at8k.duration();
  const FrameSequence frames = frame_signal(at8k, opt.win_ms, opt.hop_ms);
  r.grid.num_frames = frames.size();
  r.grid.win_len = frames.win_len();
  r.grid.hop_len = frames.hop_len();
  r.grid.sample_rate = frames.sample_rate();
  if (frames.degenerate()) {
    r.degenerate = true;
    return r;
  }
  r.raw = extract_raw_features(frames);
  const RawFeatureMatrix norm = mvn_normalize(r.raw);
  r.combo = pca_first_component(norm, frame_log_energy(frames));
  r.detection = detect_on_combo(r.combo.values, opt);
  return r;
}

}  // namespace dipsad
