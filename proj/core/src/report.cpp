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
#include "dipsad/report.hpp"

#include "dipsad/error.hpp"

namespace dipsad {

using ojson = nlohmann::ordered_json;

ojson to_json(const ModalInterval& m) {
  return ojson{{"lo_idx", m.lo_idx}, {"hi_idx", m.hi_idx}, {"lo", m.lo_val}, {"hi", m.hi_val}};
}

ojson to_json(const DipNode& n) {
  ojson j;
  j["kind"] = to_string(n.kind);
  j["depth"] = n.depth;
  j["lo_idx"] = n.lo_idx;
  j["hi_idx"] = n.hi_idx;
  j["dip"] = n.dip;
  j["p_value"] = n.p_value;
  j["interval"] = to_json(n.interval);
  return j;
}

ojson to_json(const Gmm1d& g) {
  ojson j;
  j["means"] = {g.means[0], g.means[1]};
  j["vars"] = {g.vars[0], g.vars[1]};
  j["weights"] = {g.weights[0], g.weights[1]};
  j["loglik"] = g.loglik;
  j["iterations"] = g.iterations;
  j["degenerate"] = g.degenerate;
  return j;
}

ojson to_json(const DcfReport& r) {
  ojson j;
  j["id"] = r.id;
  j["scored_speech"] = r.scored_speech;
  j["scored_nonspeech"] = r.scored_nonspeech;
  j["misses"] = r.misses;
  j["false_alarms"] = r.false_alarms;
  j["p_miss"] = r.p_miss;
  j["p_fa"] = r.p_fa;
  j["dcf"] = r.dcf;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

ojson to_json(const GroupSummary& g) {
  ojson j;
  j["group"] = g.key;
  j["files"] = g.files;
  j["mean_dcf"] = g.mean_dcf;
  j["mean_p_miss"] = g.mean_p_miss;
  j["mean_p_fa"] = g.mean_p_fa;
  return j;
}

ojson utterance_report(const UtteranceResult& r, const PipelineOptions& opt) {
  ojson j;
  j["id"] = r.id;
  j["duration"] = r.duration;
  j["sample_rate"] = r.grid.sample_rate;
  j["win_len"] = r.grid.win_len;
  j["hop_len"] = r.grid.hop_len;
  j["num_frames"] = r.grid.num_frames;
  j["degenerate"] = r.degenerate;
  j["backend"] = to_string(opt.backend);
  j["alpha"] = opt.modes.alpha;
  j["bootstrap"] = opt.modes.bootstrap;
  j["seed"] = opt.modes.seed;
  j["smooth"] = opt.smooth;

  std::size_t speech = 0;
  for (auto l : r.detection.labels) speech += l ? 1 : 0;
  j["speech_frames"] = speech;

  if (!r.degenerate) {
    ojson pca;
    pca["eigenvalue"] = r.combo.eigenvalue;
    ojson loadings = ojson::object();
    for (std::size_t c = 0; c < kNumFeatures; ++c) {
      loadings[std::string(kFeatureNames[c])] = r.combo.direction[c];
    }
    pca["loadings"] = loadings;
    pca["degenerate"] = r.combo.degenerate;
    j["pca"] = pca;
  }

  const Detection& d = r.detection;
  if (d.modes) {
    ojson nodes = ojson::array();
    for (const auto& n : d.modes->trace) nodes.push_back(to_json(n));
    j["dip_nodes"] = nodes;
  }
  if (d.clusters) {
    ojson clusters = ojson::array();
    for (std::size_t k = 0; k < d.clusters->size(); ++k) {
      ojson c = to_json(d.clusters->intervals[k]);
      c["mean"] = d.clusters->means[k];
      c["frames"] = d.clusters->counts[k];
      clusters.push_back(c);
    }
    j["clusters"] = clusters;
    j["speech_cluster"] = d.speech_cluster;
  }
  j["fallback_used"] = d.fallback_used;
  if (d.gmm) j["gmm"] = to_json(*d.gmm);
  return j;
}

FrameGrid grid_from_report(const nlohmann::json& j, double* duration) {
  try {
    FrameGrid g;
    g.num_frames = j.at("num_frames").get<std::size_t>();
    g.win_len = j.at("win_len").get<std::size_t>();
    g.hop_len = j.at("hop_len").get<std::size_t>();
    g.sample_rate = j.at("sample_rate").get<int>();
    if (duration) *duration = j.at("duration").get<double>();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("diagnostics report lacks frame grid: ") + e.what());
  }
}

}  // namespace dipsad
