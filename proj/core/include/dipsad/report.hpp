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
// JSON views of results. ordered_json keeps keys in insertion order so
// the files diff cleanly between runs.

#pragma once

#include <nlohmann/json.hpp>
#include <span>

#include "dipsad/pipeline.hpp"
#include "dipsad/scoring.hpp"

namespace dipsad {

nlohmann::ordered_json to_json(const ModalInterval& m);
nlohmann::ordered_json to_json(const DipNode& n);
nlohmann::ordered_json to_json(const Gmm1d& g);
nlohmann::ordered_json to_json(const DcfReport& r);
nlohmann::ordered_json to_json(const GroupSummary& g);

nlohmann::ordered_json utterance_report(const UtteranceResult& r, const PipelineOptions& opt);

// Reads back the frame grid and duration written by utterance_report.
FrameGrid grid_from_report(const nlohmann::json& j, double* duration = nullptr);

}  // namespace dipsad
