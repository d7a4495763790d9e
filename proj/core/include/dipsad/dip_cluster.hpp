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
// Recursive dip clustering of a 1-D feature stream and the speech decision
// built on it.
//
// find_modes() tests the whole sample; if it is multimodal it recurses into
// the dip's modal interval to collect the central modes, then re-tests what
// lies left of the lowest central mode's upper bound and right of the
// highest central mode's lower bound, recursing into the far sides when
// those tests reject too.
//
// Between two Gaussian-like modes the recursion sees a U-shaped trough,
// which the dip test rightly calls bimodal, so tails get carved into small
// edge intervals. A final pass therefore merges neighbouring intervals
// while the points spanning some adjacent pair still pass as unimodal,
// most unimodal pair first.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dipsad/dip.hpp"
#include "dipsad/gmm.hpp"

namespace dipsad {

struct ModeOptions {
  double alpha = 0.05;
  std::size_t bootstrap = 2000;
  std::uint64_t seed = 0;
  std::size_t min_cluster_size = 8;
  bool merge_unimodal = true;
};

// One dip test performed during the recursion.
struct DipNode {
  enum class Kind { region, left_check, right_check, merge_check };
  Kind kind = Kind::region;
  int depth = 0;
  std::size_t lo_idx = 0;  // tested range of the sorted sample, inclusive
  std::size_t hi_idx = 0;
  double dip = 0.0;
  double p_value = 1.0;
  ModalInterval interval;  // modal interval of the tested range (global indices)
};

const char* to_string(DipNode::Kind k);

struct ModeResult {
  std::vector<ModalInterval> intervals;  // disjoint, ascending
  std::vector<DipNode> trace;            // in evaluation order
};

ModeResult find_modes(const SortedSample& s, const ModeOptions& opt = {});

struct ClusterSet {
  std::vector<ModalInterval> intervals;
  std::vector<std::size_t> assignment;  // cluster id per frame, original order
  std::vector<double> means;
  std::vector<std::size_t> counts;

  std::size_t size() const { return intervals.size(); }
};

// Frames inside an interval take that interval's id; a frame between two
// intervals goes to the nearer boundary, ties to the lower interval.
// `values` are the unsorted feature values that `s` was built from.
ClusterSet assign_frames(std::span<const ModalInterval> intervals,
                         const SortedSample& s, std::span<const double> values);

struct SadDecision {
  std::vector<std::uint8_t> labels;  // 1 = speech
  int speech_cluster = -1;           // -1 when the fallback decided
  bool fallback_used = false;
};

// Labels for a unimodal utterance.
using FallbackBackend = std::function<std::vector<std::uint8_t>(std::span<const double>)>;

// Two or more clusters: the one with the largest mean is speech. A single
// cluster delegates the whole utterance to `fallback`.
SadDecision decide_speech(const ClusterSet& c, std::span<const double> values,
                          const FallbackBackend& fallback);

// Fallback that fits the two-component GMM and thresholds it.
FallbackBackend gmm_fallback(const GmmOptions& opt = {});

// Majority vote over a +-radius window (clipped at the edges); an even
// split keeps the centre label.
std::vector<std::uint8_t> median_smooth(std::span<const std::uint8_t> labels,
                                        std::size_t radius = 5);

}  // namespace dipsad
