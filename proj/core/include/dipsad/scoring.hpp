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
// Frame-level detection cost: DCF = 0.25 P_fa + 0.75 P_miss over scored
// frames, with an optional collar around reference speech boundaries.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace dipsad {

inline constexpr double kFalseAlarmWeight = 0.25;
inline constexpr double kMissWeight = 0.75;

struct Segment {
  double start = 0.0;
  double end = 0.0;
  bool speech = false;
};

// Sorted, non-overlapping segments; time not covered is non-speech.
struct SegmentList {
  std::vector<Segment> segments;
  double duration = 0.0;

  std::vector<Segment> speech() const;
};

// One whitespace-separated "start end label" per line, seconds; label is
// S/NS or speech/non-speech, case-insensitive. Blank lines and lines
// starting with '#' are skipped. When `duration` is given, segments are
// clipped to it; otherwise the duration is the last segment end.
SegmentList parse_reference(std::istream& in, std::optional<double> duration = {},
                            const std::string& source = "<stream>");
SegmentList load_reference(const std::filesystem::path& path,
                           std::optional<double> duration = {});

// Frame i is centred at (i * hop + win / 2) / rate seconds.
struct FrameGrid {
  std::size_t num_frames = 0;
  std::size_t win_len = 320;
  std::size_t hop_len = 80;
  int sample_rate = 8000;

  double center(std::size_t i) const {
    return (static_cast<double>(i * hop_len) + 0.5 * static_cast<double>(win_len)) / sample_rate;
  }
  double hop_seconds() const { return static_cast<double>(hop_len) / sample_rate; }
};

// Largest grid whose frames fit in `duration` seconds.
FrameGrid grid_for_duration(double duration, std::size_t win_len = 320,
                            std::size_t hop_len = 80, int sample_rate = 8000);

// 1 where the frame centre falls inside a speech segment.
std::vector<std::uint8_t> frame_labels(const SegmentList& ref, const FrameGrid& grid);

// 1 = scored. A frame is ignored when its centre lies strictly closer than
// collar_s to any speech segment boundary. collar_s = 0 scores every frame.
std::vector<std::uint8_t> apply_collar(const SegmentList& ref, const FrameGrid& grid,
                                       double collar_s);

struct DcfReport {
  std::string id;
  std::size_t scored_speech = 0;
  std::size_t scored_nonspeech = 0;
  std::size_t misses = 0;
  std::size_t false_alarms = 0;
  double p_miss = 0.0;
  double p_fa = 0.0;
  double dcf = 0.0;
  std::vector<std::string> warnings;
};

double dcf_value(double p_fa, double p_miss);

DcfReport compute_dcf(std::span<const std::uint8_t> hyp, std::span<const std::uint8_t> ref,
                      std::span<const std::uint8_t> mask, const std::string& id = {});

// Convenience: reference labels and collar mask derived from `ref`.
DcfReport score_against(std::span<const std::uint8_t> hyp, const SegmentList& ref,
                        const FrameGrid& grid, double collar_s, const std::string& id = {});

struct GroupSummary {
  std::string key;
  std::size_t files = 0;
  double mean_dcf = 0.0;
  double mean_p_miss = 0.0;
  double mean_p_fa = 0.0;
};

// Unweighted per-file means within each group, groups in ascending key
// order. Throws if `reports` is empty.
std::vector<GroupSummary> aggregate(std::span<const DcfReport> reports,
                                    const std::function<std::string(const DcfReport&)>& key);

// (baseline - proposed) / baseline * 100; positive means the proposed
// system has lower cost.
double relative_improvement(double baseline, double proposed);

// Runs of equal labels as "start<TAB>end<TAB>S|NS". Frame i owns
// [c_i - hop/2, c_i + hop/2), stretched to cover [0, duration].
SegmentList labels_to_segments(std::span<const std::uint8_t> labels, const FrameGrid& grid,
                               double duration);
void write_segments(std::ostream& out, const SegmentList& segs);

}  // namespace dipsad
