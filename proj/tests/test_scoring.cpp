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
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dipsad/error.hpp"
#include "dipsad/scoring.hpp"

namespace dipsad {
namespace {

SegmentList parse(const std::string& text, std::optional<double> duration = {}) {
  std::istringstream in(text);
  return parse_reference(in, duration);
}

// 100 frames per second with centres on the 10 ms grid plus 5 ms.
FrameGrid centi_grid(double seconds) {
  FrameGrid g;
  g.win_len = 80;
  g.hop_len = 80;
  g.num_frames = static_cast<std::size_t>(std::lround(seconds * 100));
  return g;
}

TEST(Reference, GapsAreNonSpeech) {
  const SegmentList r = parse("2.0\t5.0\tS\n", 10.0);
  EXPECT_EQ(r.duration, 10.0);
  ASSERT_EQ(r.speech().size(), 1u);
  EXPECT_EQ(r.speech()[0].start, 2.0);
  EXPECT_EQ(r.speech()[0].end, 5.0);
  const auto labels = frame_labels(r, centi_grid(10.0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double c = centi_grid(10.0).center(i);
    EXPECT_EQ(labels[i], c >= 2.0 && c < 5.0 ? 1 : 0) << c;
  }
}

TEST(Reference, EmptyFileIsAllNonSpeech) {
  const SegmentList r = parse("", 4.0);
  EXPECT_TRUE(r.speech().empty());
  for (auto l : frame_labels(r, centi_grid(4.0))) EXPECT_EQ(l, 0);
  EXPECT_TRUE(parse("# only a comment\n\n").speech().empty());
}

TEST(Reference, LabelSynonymsAndSorting) {
  const SegmentList r = parse("6 7 speech\n0 1 NS\n1 2 non-speech\n3 4 s\n");
  ASSERT_EQ(r.segments.size(), 4u);
  EXPECT_EQ(r.segments[0].start, 0.0);
  EXPECT_EQ(r.segments[3].start, 6.0);
  EXPECT_EQ(r.speech().size(), 2u);
  EXPECT_EQ(r.duration, 7.0);
}

TEST(Reference, MalformedInputIsRejected) {
  EXPECT_THROW(parse("5.0 3.0 S\n"), Error);
  EXPECT_THROW(parse("1 3 S\n2 4 S\n"), Error);
  EXPECT_THROW(parse("1 3 maybe\n"), Error);
  EXPECT_THROW(parse("1 x S\n"), Error);
  EXPECT_THROW(parse("1 2\n"), Error);
  try {
    parse("0 1 S\n\n1 x S\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

TEST(Collar, IgnoresZonesAroundSpeechBoundaries) {
  const SegmentList r = parse("10 20 S\n", 30.0);
  const FrameGrid g = centi_grid(30.0);
  const auto mask = apply_collar(r, g, 2.0);
  const auto ref = frame_labels(r, g);
  std::size_t speech = 0, nonspeech = 0;
  for (std::size_t i = 0; i < g.num_frames; ++i) {
    const double c = g.center(i);
    const bool ignored = (c > 8.0 && c < 12.0) || (c > 18.0 && c < 22.0);
    EXPECT_EQ(mask[i], ignored ? 0 : 1) << c;
    if (mask[i]) (ref[i] ? speech : nonspeech) += 1;
  }
  EXPECT_EQ(speech, 600u);            // [12, 18]
  EXPECT_EQ(nonspeech, 800u + 800u);  // [0, 8] and [22, 30]

  for (auto m : apply_collar(r, g, 0.0)) EXPECT_EQ(m, 1);
}

TEST(Collar, NearbySegmentsMergeTheirZones) {
  const SegmentList r = parse("5 6 S\n7 8 S\n", 12.0);
  const FrameGrid g = centi_grid(12.0);
  const auto mask = apply_collar(r, g, 2.0);
  for (std::size_t i = 0; i < g.num_frames; ++i) {
    const double c = g.center(i);
    EXPECT_EQ(mask[i], (c > 3.0 && c < 10.0) ? 0 : 1) << c;
  }
}

TEST(Collar, ScoredSetShrinksAsCollarGrows) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> len(0.2, 4.0);
  for (int t = 0; t < 30; ++t) {
    std::ostringstream ref;
    double at = len(rng);
    while (at < 55.0) {
      const double end = at + len(rng);
      ref << at << ' ' << end << " S\n";
      at = end + len(rng);
    }
    const SegmentList r = parse(ref.str(), 60.0);
    const FrameGrid g = centi_grid(60.0);
    std::vector<std::uint8_t> prev(g.num_frames, 1);
    for (double collar : {0.0, 0.25, 0.5, 1.0, 2.0, 3.0}) {
      const auto m = apply_collar(r, g, collar);
      for (std::size_t i = 0; i < m.size(); ++i) ASSERT_LE(m[i], prev[i]);
      prev = m;
    }
  }
}

TEST(Dcf, Arithmetic) {
  EXPECT_EQ(dcf_value(0.2, 0.1), 0.125);
  EXPECT_EQ(dcf_value(1.0, 0.0), 0.25);
  EXPECT_EQ(dcf_value(0.0, 1.0), 0.75);
}

TEST(Dcf, CountsScoredFramesOnly) {
  const std::vector<std::uint8_t> ref = {1, 1, 0, 0, 1, 0};
  const std::vector<std::uint8_t> all(6, 1);
  const DcfReport perfect = compute_dcf(ref, ref, all, "a");
  EXPECT_EQ(perfect.id, "a");
  EXPECT_EQ(perfect.dcf, 0.0);

  const std::vector<std::uint8_t> speech(6, 1);
  const DcfReport fa = compute_dcf(speech, ref, all);
  EXPECT_EQ(fa.p_fa, 1.0);
  EXPECT_EQ(fa.p_miss, 0.0);
  EXPECT_EQ(fa.dcf, 0.25);
  EXPECT_EQ(fa.scored_speech, 3u);
  EXPECT_EQ(fa.scored_nonspeech, 3u);

  const std::vector<std::uint8_t> hyp = {0, 1, 1, 0, 1, 0};
  const DcfReport mixed = compute_dcf(hyp, ref, all);
  EXPECT_EQ(mixed.misses, 1u);
  EXPECT_EQ(mixed.false_alarms, 1u);
  EXPECT_EQ(mixed.dcf, 0.25 * mixed.p_fa + 0.75 * mixed.p_miss);
  EXPECT_THROW(compute_dcf(std::vector<std::uint8_t>(5, 0), ref, all), Error);
}

TEST(Dcf, EmptyClassesGiveZeroRateWithWarning) {
  const std::vector<std::uint8_t> ref(10, 1), hyp(10, 1), all(10, 1);
  const DcfReport r = compute_dcf(hyp, ref, all);
  EXPECT_EQ(r.p_fa, 0.0);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Dcf, IgnoredFramesNeverMatter) {
  const SegmentList r = parse("3 7 S\n12 15 S\n", 20.0);
  const FrameGrid g = centi_grid(20.0);
  const auto ref = frame_labels(r, g);
  const auto mask = apply_collar(r, g, 1.0);
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.3);
  std::vector<std::uint8_t> hyp(g.num_frames);
  for (auto& h : hyp) h = coin(rng);
  const DcfReport base = score_against(hyp, r, g, 1.0);
  for (int t = 0; t < 20; ++t) {
    auto p = hyp;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!mask[i]) p[i] = coin(rng);
    }
    const DcfReport q = score_against(p, r, g, 1.0);
    EXPECT_EQ(q.misses, base.misses);
    EXPECT_EQ(q.false_alarms, base.false_alarms);
    EXPECT_EQ(q.dcf, base.dcf);
  }
  EXPECT_EQ(base.dcf, compute_dcf(hyp, ref, mask).dcf);
}

TEST(Dcf, SwappingClassesSwapsRoles) {
  const std::vector<std::uint8_t> ref = {1, 1, 1, 0, 0, 1, 0, 0, 0, 0};
  const std::vector<std::uint8_t> hyp = {1, 0, 1, 1, 0, 0, 0, 1, 1, 0};
  const std::vector<std::uint8_t> all(ref.size(), 1);
  std::vector<std::uint8_t> nref, nhyp;
  for (auto v : ref) nref.push_back(!v);
  for (auto v : hyp) nhyp.push_back(!v);
  const DcfReport a = compute_dcf(hyp, ref, all), b = compute_dcf(nhyp, nref, all);
  EXPECT_EQ(a.misses, b.false_alarms);
  EXPECT_EQ(a.false_alarms, b.misses);
  EXPECT_EQ(a.scored_speech, b.scored_nonspeech);
  EXPECT_EQ(a.p_miss, b.p_fa);
}

TEST(Aggregate, UnweightedMeansPerGroup) {
  std::vector<DcfReport> reports(3);
  reports[0].id = "chA_1";
  reports[0].dcf = 0.1;
  reports[1].id = "chA_2";
  reports[1].dcf = 0.3;
  reports[2].id = "chB_1";
  reports[2].dcf = 0.05;
  const auto groups = aggregate(reports, [](const DcfReport& r) { return r.id.substr(0, 3); });
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].key, "chA");
  EXPECT_EQ(groups[0].files, 2u);
  EXPECT_DOUBLE_EQ(groups[0].mean_dcf, 0.2);
  EXPECT_EQ(groups[1].mean_dcf, 0.05);
  EXPECT_THROW(aggregate({}, [](const DcfReport&) { return std::string(); }), Error);
}

TEST(Aggregate, RelativeImprovement) {
  EXPECT_NEAR(relative_improvement(8.54, 13.21), -54.68, 0.005);
  EXPECT_NEAR(relative_improvement(7.46, 7.17), 3.89, 0.005);
  EXPECT_EQ(relative_improvement(4.0, 3.0), 25.0);
}

TEST(Segments, LabelsRoundTripThroughSegments) {
  const FrameGrid g = grid_for_duration(3.0);
  EXPECT_EQ(g.num_frames, (24000u - 320u) / 80u + 1u);
  std::vector<std::uint8_t> labels(g.num_frames, 0);
  for (std::size_t i = 50; i < 120; ++i) labels[i] = 1;
  const SegmentList segs = labels_to_segments(labels, g, 3.0);
  ASSERT_EQ(segs.segments.size(), 3u);
  EXPECT_EQ(segs.segments.front().start, 0.0);
  EXPECT_EQ(segs.segments.back().end, 3.0);
  EXPECT_EQ(frame_labels(segs, g), labels);

  std::ostringstream out;
  write_segments(out, segs);
  EXPECT_EQ(out.str().substr(0, 21), "0.000000\t0.515000\tNS\n");
  std::istringstream back(out.str());
  EXPECT_EQ(frame_labels(parse_reference(back, 3.0), g), labels);
}

}  // namespace
}  // namespace dipsad
