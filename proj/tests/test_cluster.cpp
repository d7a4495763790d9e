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

#include <algorithm>
#include <random>
#include <vector>

#include "dipsad/dip_cluster.hpp"
#include "dipsad/error.hpp"
#include "dipsad/pipeline.hpp"
#include "synth.hpp"

namespace dipsad {
namespace {

using testing::Rng;

ModalInterval iv(double lo, double hi) { return {0, 0, lo, hi}; }

TEST(FindModes, NormalSampleIsOneInterval) {
  Rng rng(2000);
  const auto x = testing::normal_sample(rng, 2000);
  const ModeResult r = find_modes(SortedSample::from_unsorted(x));
  ASSERT_EQ(r.intervals.size(), 1u);
  EXPECT_EQ(r.intervals[0].lo_idx, 0u);
  EXPECT_EQ(r.intervals[0].hi_idx, 1999u);
}

TEST(FindModes, TwoPointMassesGiveTwoIntervals) {
  std::vector<double> x(500, 0.0);
  x.insert(x.end(), 500, 10.0);
  const ModeResult r = find_modes(SortedSample::from_unsorted(x));
  ASSERT_EQ(r.intervals.size(), 2u);
  EXPECT_EQ(r.intervals[0].lo_val, 0.0);
  EXPECT_EQ(r.intervals[0].hi_val, 0.0);
  EXPECT_EQ(r.intervals[1].lo_val, 10.0);
  EXPECT_EQ(r.intervals[1].hi_val, 10.0);
}

TEST(FindModes, ThreeSeparatedClusters) {
  Rng rng(3);
  std::vector<double> x;
  for (double m : {-10.0, 0.0, 10.0}) {
    const auto part = testing::normal_sample(rng, 600, m);
    x.insert(x.end(), part.begin(), part.end());
  }
  const ModeResult r = find_modes(SortedSample::from_unsorted(x));
  ASSERT_EQ(r.intervals.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    const double centre = 0.5 * (r.intervals[k].lo_val + r.intervals[k].hi_val);
    EXPECT_NEAR(centre, -10.0 + 10.0 * k, 1.0);
  }
}

TEST(FindModes, IntervalsAreDisjointAscendingAndTraceIsLabelled) {
  Rng rng(8);
  const auto data = testing::five_modes(rng, 300);
  const ModeResult r = find_modes(SortedSample::from_unsorted(data.values));
  ASSERT_FALSE(r.intervals.empty());
  for (std::size_t k = 0; k + 1 < r.intervals.size(); ++k) {
    EXPECT_LT(r.intervals[k].hi_idx, r.intervals[k + 1].lo_idx);
    EXPECT_LT(r.intervals[k].hi_val, r.intervals[k + 1].lo_val);
  }
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front().kind, DipNode::Kind::region);
  EXPECT_EQ(r.trace.front().lo_idx, 0u);
  EXPECT_EQ(r.trace.front().hi_idx, data.values.size() - 1);
  for (const auto& n : r.trace) {
    EXPECT_LE(n.lo_idx, n.hi_idx);
    EXPECT_GE(n.p_value, 0.0);
    EXPECT_LE(n.p_value, 1.0);
  }
}

TEST(FindModes, TinySamplesAreOneTrivialInterval) {
  for (std::size_t n : {1u, 2u, 5u, 7u}) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i * i);
    const ModeResult r = find_modes(SortedSample::from_unsorted(x));
    ASSERT_EQ(r.intervals.size(), 1u);
    EXPECT_EQ(r.intervals[0].hi_idx, n - 1);
  }
  EXPECT_TRUE(find_modes(SortedSample::from_unsorted(std::vector<double>{})).intervals.empty());
}

TEST(FindModes, RejectsBadAlpha) {
  ModeOptions o;
  o.alpha = 1.0;
  EXPECT_THROW(find_modes(SortedSample::from_unsorted(std::vector<double>{1, 2, 3}), o), Error);
}

TEST(FindModes, DeterministicForFixedSeed) {
  Rng rng(77);
  const auto data = testing::planted_sad(rng, 3000);
  const SortedSample s = SortedSample::from_unsorted(data.values);
  ModeOptions o;
  o.seed = 4;
  const ModeResult a = find_modes(s, o), b = find_modes(s, o);
  ASSERT_EQ(a.intervals.size(), b.intervals.size());
  for (std::size_t k = 0; k < a.intervals.size(); ++k) {
    EXPECT_EQ(a.intervals[k].lo_idx, b.intervals[k].lo_idx);
    EXPECT_EQ(a.intervals[k].hi_idx, b.intervals[k].hi_idx);
  }
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) EXPECT_EQ(a.trace[k].p_value, b.trace[k].p_value);
}

TEST(FindModes, AffineMapKeepsIntervalsAndLabels) {
  Rng rng(5);
  std::vector<double> x = testing::normal_sample(rng, 800, -3.0);
  const auto hi = testing::normal_sample(rng, 800, 3.0);
  x.insert(x.end(), hi.begin(), hi.end());
  std::vector<double> y = x;
  for (double& v : y) v = 2.0 * v + 7.0;

  PipelineOptions opt;
  const Detection dx = detect_on_combo(x, opt);
  const Detection dy = detect_on_combo(y, opt);
  ASSERT_TRUE(dx.modes && dy.modes);
  ASSERT_EQ(dx.modes->intervals.size(), dy.modes->intervals.size());
  for (std::size_t k = 0; k < dx.modes->intervals.size(); ++k) {
    EXPECT_EQ(dx.modes->intervals[k].lo_idx, dy.modes->intervals[k].lo_idx);
    EXPECT_EQ(dx.modes->intervals[k].hi_idx, dy.modes->intervals[k].hi_idx);
  }
  EXPECT_EQ(dx.labels, dy.labels);
}

TEST(AssignFrames, SingleIntervalTakesEverything) {
  const std::vector<double> x = {0.3, 0.1, 0.2};
  const SortedSample s = SortedSample::from_unsorted(x);
  const std::vector<ModalInterval> one = {iv(0.1, 0.3)};
  const ClusterSet c = assign_frames(one, s, x);
  EXPECT_EQ(c.assignment, (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_NEAR(c.means[0], 0.2, 1e-15);
}

TEST(AssignFrames, GapTiesGoToLowerInterval) {
  const std::vector<double> x = {2.0, 0.5, 3.5, 1.9, 2.1, -5.0, 9.0};
  const SortedSample s = SortedSample::from_unsorted(x);
  const std::vector<ModalInterval> two = {iv(0.0, 1.0), iv(3.0, 4.0)};
  const ClusterSet c = assign_frames(two, s, x);
  EXPECT_EQ(c.assignment, (std::vector<std::size_t>{0, 0, 1, 0, 1, 0, 1}));
  EXPECT_EQ(c.counts, (std::vector<std::size_t>{4, 3}));
}

TEST(AssignFrames, EveryFrameIsLabelled) {
  Rng rng(13);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> cuts(6);
    for (double& v : cuts) v = u(rng);
    std::sort(cuts.begin(), cuts.end());
    std::vector<ModalInterval> ivs;
    for (std::size_t k = 0; k + 1 < cuts.size(); k += 2) ivs.push_back(iv(cuts[k], cuts[k + 1]));
    std::vector<double> x(500);
    for (double& v : x) v = 1.5 * u(rng);
    const ClusterSet c = assign_frames(ivs, SortedSample::from_unsorted(x), x);
    std::size_t total = 0;
    for (auto n : c.counts) total += n;
    EXPECT_EQ(total, x.size());
    for (std::size_t f = 0; f < x.size(); ++f) {
      ASSERT_LT(c.assignment[f], ivs.size());
      // Nearest-boundary rule.
      double best = 1e300;
      std::size_t arg = 0;
      for (std::size_t k = 0; k < ivs.size(); ++k) {
        const double d = x[f] < ivs[k].lo_val ? ivs[k].lo_val - x[f]
                                              : (x[f] > ivs[k].hi_val ? x[f] - ivs[k].hi_val : 0.0);
        if (d < best) {
          best = d;
          arg = k;
        }
      }
      EXPECT_EQ(c.assignment[f], arg);
    }
  }
}

TEST(AssignFrames, RejectsEmptyIntervalList) {
  const std::vector<double> x = {1.0};
  EXPECT_THROW(assign_frames({}, SortedSample::from_unsorted(x), x), Error);
}

ClusterSet clusters_with_means(std::vector<double> means, std::vector<std::size_t> assignment) {
  ClusterSet c;
  c.intervals.resize(means.size());
  c.means = std::move(means);
  c.assignment = std::move(assignment);
  c.counts.assign(c.means.size(), 0);
  for (auto a : c.assignment) ++c.counts[a];
  return c;
}

TEST(DecideSpeech, HighestMeanClusterIsSpeech) {
  const std::vector<double> values(4, 0.0);
  const SadDecision two = decide_speech(clusters_with_means({-0.8, 2.1}, {0, 1, 1, 0}), values, {});
  EXPECT_EQ(two.speech_cluster, 1);
  EXPECT_EQ(two.labels, (std::vector<std::uint8_t>{0, 1, 1, 0}));
  EXPECT_FALSE(two.fallback_used);

  const SadDecision three = decide_speech(clusters_with_means({-1.2, -0.3, 1.9}, {2, 1, 0, 2}), values, {});
  EXPECT_EQ(three.speech_cluster, 2);
  EXPECT_EQ(three.labels, (std::vector<std::uint8_t>{1, 0, 0, 1}));
}

TEST(DecideSpeech, SingleClusterDelegatesToFallback) {
  Rng rng(17);
  const auto x = testing::normal_sample(rng, 300);
  const SadDecision d = decide_speech(clusters_with_means({0.0}, std::vector<std::size_t>(x.size(), 0)), x,
                                      gmm_fallback());
  EXPECT_TRUE(d.fallback_used);
  EXPECT_EQ(d.speech_cluster, -1);
  EXPECT_EQ(d.labels, gmm_decide(fit_em(x), x));
  EXPECT_THROW(decide_speech(clusters_with_means({0.0}, {0}), std::vector<double>{1.0}, {}), Error);
}

TEST(MedianSmooth, RemovesShortBlipsAndKeepsTies) {
  std::vector<std::uint8_t> l(40, 0);
  l[10] = 1;
  for (int i = 20; i < 35; ++i) l[i] = 1;
  l[27] = 0;
  const auto s = median_smooth(l, 5);
  EXPECT_EQ(s[10], 0);
  EXPECT_EQ(s[27], 1);
  EXPECT_EQ(s[22], 1);
  EXPECT_EQ(s[5], 0);
  // Window of 2 at the edge with an even split keeps the centre.
  EXPECT_EQ(median_smooth(std::vector<std::uint8_t>{1, 0}, 1), (std::vector<std::uint8_t>{1, 0}));
}

}  // namespace
}  // namespace dipsad
