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
#include "dipsad/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "dipsad/error.hpp"

namespace dipsad {
namespace {

std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::optional<bool> parse_label(const std::string& raw) {
  const std::string s = lower(raw);
  if (s == "s" || s == "speech") return true;
  if (s == "ns" || s == "non-speech" || s == "nonspeech") return false;
  return std::nullopt;
}

std::optional<double> parse_number(const std::string& tok) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<Segment> SegmentList::speech() const {
  std::vector<Segment> out;
  for (const auto& s : segments) {
    if (s.speech) out.push_back(s);
  }
  return out;
}

SegmentList parse_reference(std::istream& in, std::optional<double> duration,
                            const std::string& source) {
  SegmentList list;
  std::vector<std::size_t> line_of;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string a, b, c, extra;
    if (!(ls >> a)) continue;
    if (a[0] == '#') continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (!(ls >> b >> c) || (ls >> extra)) {
      throw Error(where + "expected 'start end label', got '" + line + "'");
    }
    const auto start = parse_number(a);
    const auto end = parse_number(b);
    const auto speech = parse_label(c);
    if (!start || !end) throw Error(where + "bad time value in '" + line + "'");
    if (!speech) throw Error(where + "unknown label '" + c + "'");
    if (*start < 0.0) throw Error(where + "negative start time");
    if (!(*end > *start)) throw Error(where + "segment end must be after its start");
    list.segments.push_back({*start, *end, *speech});
    line_of.push_back(lineno);
  }

  std::vector<std::size_t> order(list.segments.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return list.segments[x].start < list.segments[y].start;
  });
  std::vector<Segment> sorted;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Segment& s = list.segments[order[k]];
    if (!sorted.empty() && s.start < sorted.back().end) {
      throw Error(source + ":" + std::to_string(line_of[order[k]]) +
                  ": segment overlaps the one on line " + std::to_string(line_of[order[k - 1]]));
    }
    sorted.push_back(s);
  }
  list.segments = std::move(sorted);

  if (duration) {
    list.duration = *duration;
    std::vector<Segment> clipped;
    for (Segment s : list.segments) {
      if (s.start >= *duration) continue;
      s.end = std::min(s.end, *duration);
      clipped.push_back(s);
    }
    list.segments = std::move(clipped);
  } else {
    list.duration = list.segments.empty() ? 0.0 : list.segments.back().end;
  }
  return list;
}

SegmentList load_reference(const std::filesystem::path& path, std::optional<double> duration) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open reference file: " + path.string());
  return parse_reference(in, duration, path.string());
}

FrameGrid grid_for_duration(double duration, std::size_t win_len, std::size_t hop_len,
                            int sample_rate) {
  FrameGrid g;
  g.win_len = win_len;
  g.hop_len = hop_len;
  g.sample_rate = sample_rate;
  const auto samples = static_cast<std::size_t>(std::llround(std::max(0.0, duration) * sample_rate));
  g.num_frames = samples >= win_len ? (samples - win_len) / hop_len + 1 : 0;
  return g;
}

std::vector<std::uint8_t> frame_labels(const SegmentList& ref, const FrameGrid& grid) {
  std::vector<std::uint8_t> out(grid.num_frames, 0);
  const auto speech = ref.speech();
  std::size_t k = 0;
  for (std::size_t i = 0; i < grid.num_frames; ++i) {
    const double t = grid.center(i);
    while (k < speech.size() && speech[k].end <= t) ++k;
    if (k < speech.size() && speech[k].start <= t) out[i] = 1;
  }
  return out;
}

std::vector<std::uint8_t> apply_collar(const SegmentList& ref, const FrameGrid& grid,
                                       double collar_s) {
  if (collar_s < 0.0) throw Error("apply_collar: collar must be non-negative");
  std::vector<std::uint8_t> mask(grid.num_frames, 1);
  if (collar_s == 0.0) return mask;
  std::vector<double> bounds;
  for (const auto& s : ref.speech()) {
    bounds.push_back(s.start);
    bounds.push_back(s.end);
  }
  std::sort(bounds.begin(), bounds.end());
  for (std::size_t i = 0; i < grid.num_frames; ++i) {
    const double t = grid.center(i);
    const auto it = std::lower_bound(bounds.begin(), bounds.end(), t);
    const bool near_next = it != bounds.end() && *it - t < collar_s;
    const bool near_prev = it != bounds.begin() && t - *(it - 1) < collar_s;
    if (near_next || near_prev) mask[i] = 0;
  }
  return mask;
}

double dcf_value(double p_fa, double p_miss) {
  return kFalseAlarmWeight * p_fa + kMissWeight * p_miss;
}

DcfReport compute_dcf(std::span<const std::uint8_t> hyp, std::span<const std::uint8_t> ref,
                      std::span<const std::uint8_t> mask, const std::string& id) {
  if (hyp.size() != ref.size() || mask.size() != ref.size()) {
    throw Error("compute_dcf: hypothesis has " + std::to_string(hyp.size()) +
                " frames, reference " + std::to_string(ref.size()) + ", mask " +
                std::to_string(mask.size()));
  }
  DcfReport r;
  r.id = id;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (!mask[i]) continue;
    if (ref[i]) {
      ++r.scored_speech;
      if (!hyp[i]) ++r.misses;
    } else {
      ++r.scored_nonspeech;
      if (hyp[i]) ++r.false_alarms;
    }
  }
  if (r.scored_speech > 0) {
    r.p_miss = static_cast<double>(r.misses) / static_cast<double>(r.scored_speech);
  } else {
    r.warnings.push_back("no scored speech frames; miss rate set to 0");
  }
  if (r.scored_nonspeech > 0) {
    r.p_fa = static_cast<double>(r.false_alarms) / static_cast<double>(r.scored_nonspeech);
  } else {
    r.warnings.push_back("no scored non-speech frames; false-alarm rate set to 0");
  }
  r.dcf = dcf_value(r.p_fa, r.p_miss);
  return r;
}

DcfReport score_against(std::span<const std::uint8_t> hyp, const SegmentList& ref,
                        const FrameGrid& grid, double collar_s, const std::string& id) {
  const auto labels = frame_labels(ref, grid);
  const auto mask = apply_collar(ref, grid, collar_s);
  return compute_dcf(hyp, labels, mask, id);
}

std::vector<GroupSummary> aggregate(std::span<const DcfReport> reports,
                                    const std::function<std::string(const DcfReport&)>& key) {
  if (reports.empty()) throw Error("aggregate: no reports to summarize");
  std::map<std::string, GroupSummary> groups;
  for (const auto& r : reports) {
    const std::string k = key ? key(r) : std::string("all");
    GroupSummary& g = groups[k];
    g.key = k;
    ++g.files;
    g.mean_dcf += r.dcf;
    g.mean_p_miss += r.p_miss;
    g.mean_p_fa += r.p_fa;
  }
  std::vector<GroupSummary> out;
  for (auto& [k, g] : groups) {
    const auto n = static_cast<double>(g.files);
    g.mean_dcf /= n;
    g.mean_p_miss /= n;
    g.mean_p_fa /= n;
    out.push_back(g);
  }
  return out;
}

double relative_improvement(double baseline, double proposed) {
  if (baseline == 0.0) throw Error("relative_improvement: baseline cost is zero");
  return (baseline - proposed) / baseline * 100.0;
}

SegmentList labels_to_segments(std::span<const std::uint8_t> labels, const FrameGrid& grid,
                               double duration) {
  if (labels.size() != grid.num_frames) {
    throw Error("labels_to_segments: label count does not match the frame grid");
  }
  SegmentList out;
  out.duration = duration;
  if (labels.empty()) {
    if (duration > 0.0) out.segments.push_back({0.0, duration, false});
    return out;
  }
  const double half = 0.5 * grid.hop_seconds();
  double start = 0.0;
  for (std::size_t i = 1; i <= labels.size(); ++i) {
    if (i < labels.size() && (labels[i] != 0) == (labels[i - 1] != 0)) continue;
    const double end = i == labels.size() ? duration : std::min(duration, grid.center(i) - half);
    if (end > start) out.segments.push_back({start, end, labels[i - 1] != 0});
    start = std::max(start, end);
  }
  return out;
}

void write_segments(std::ostream& out, const SegmentList& segs) {
  char buf[96];
  for (const auto& s : segs.segments) {
    std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t%s\n", s.start, s.end, s.speech ? "S" : "NS");
    out << buf;
  }
}

}  // namespace dipsad
