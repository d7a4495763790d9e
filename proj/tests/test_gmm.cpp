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
#include <numbers>
#include <vector>

#include "dipsad/gmm.hpp"
#include "synth.hpp"

namespace dipsad {
namespace {

using testing::Rng;

std::vector<double> two_deltas(Rng& rng) {
  auto a = testing::normal_sample(rng, 500, 0.0, 0.1);
  const auto b = testing::normal_sample(rng, 500, 10.0, 0.1);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

TEST(FitEm, RecoversTwoNarrowComponents) {
  Rng rng(1);
  const Gmm1d g = fit_em(two_deltas(rng));
  EXPECT_FALSE(g.degenerate);
  EXPECT_NEAR(g.means[0], 0.0, 0.1);
  EXPECT_NEAR(g.means[1], 10.0, 0.1);
  EXPECT_NEAR(g.vars[0], 0.01, 0.005);
  EXPECT_NEAR(g.vars[1], 0.01, 0.005);
  EXPECT_EQ(g.weights[0], 0.5);
  EXPECT_EQ(g.weights[1], 0.5);
}

TEST(FitEm, ConstantInputIsDegenerate) {
  const std::vector<double> x(50, 3.25);
  const Gmm1d g = fit_em(x);
  EXPECT_TRUE(g.degenerate);
  EXPECT_EQ(g.means[0], 3.25);
  EXPECT_EQ(g.means[1], 3.25);
  EXPECT_GT(g.vars[0], 0.0);
  EXPECT_EQ(gmm_decide(g, x), std::vector<std::uint8_t>(x.size(), 0));
  EXPECT_TRUE(fit_em(std::vector<double>{1.0, 2.0, 3.0}).degenerate);
}

TEST(FitEm, LogLikelihoodNeverDecreases) {
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    const auto x = testing::random_sample(rng, 20 + 53 * t, t);
    const Gmm1d g = fit_em(x);
    for (std::size_t i = 1; i < g.trace.size(); ++i) ASSERT_GE(g.trace[i], g.trace[i - 1] - 1e-9) << t;
    for (double v : g.vars) EXPECT_GE(v, g.var_floor);
    EXPECT_LE(g.means[0], g.means[1]);
    EXPECT_LE(g.iterations, 200u);
  }
}

TEST(FitEm, FinalLikelihoodMatchesDirectEvaluation) {
  Rng rng(3);
  const auto x = testing::planted_sad(rng, 2000).values;
  const Gmm1d g = fit_em(x);
  EXPECT_NEAR(g.loglik, gmm_log_likelihood(g, x), 1e-6 * std::abs(g.loglik));
  // Hand-rolled mixture density.
  double ll = 0.0;
  for (double v : x) {
    double p = 0.0;
    for (int k = 0; k < 2; ++k) {
      p += 0.5 * std::exp(-0.5 * (v - g.means[k]) * (v - g.means[k]) / g.vars[k]) /
           std::sqrt(2.0 * std::numbers::pi * g.vars[k]);
    }
    ll += std::log(p);
  }
  EXPECT_NEAR(gmm_log_likelihood(g, x), ll, 1e-9 * std::abs(ll));
}

Gmm1d model(double m0, double v0, double m1, double v1) {
  Gmm1d g;
  g.means = {m0, m1};
  g.vars = {v0, v1};
  return g;
}

TEST(GmmDecide, OwnMeanIsSpeechMidpointIsNot) {
  const Gmm1d g = model(-1.0, 1.0, 3.0, 1.0);
  EXPECT_EQ(gmm_decide(g, std::vector<double>{3.0, 1.0, 0.999, 1.001, -1.0}),
            (std::vector<std::uint8_t>{1, 0, 0, 1, 0}));
  const auto roots = gmm_decision_roots(g);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_DOUBLE_EQ(roots[0], 1.0);
}

TEST(GmmDecide, UnequalVariancesFlipAtQuadraticRoots) {
  const Gmm1d g = model(0.0, 4.0, 3.0, 0.25);
  const auto roots = gmm_decision_roots(g);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_LT(roots[0], roots[1]);
  // Dense scan: every label change sits next to a root.
  std::vector<double> grid;
  for (double v = -10.0; v <= 10.0; v += 1e-3) grid.push_back(v);
  const auto labels = gmm_decide(g, grid);
  std::vector<double> flips;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (labels[i] != labels[i - 1]) flips.push_back(0.5 * (grid[i] + grid[i - 1]));
  }
  ASSERT_EQ(flips.size(), 2u);
  EXPECT_NEAR(flips[0], roots[0], 1e-3);
  EXPECT_NEAR(flips[1], roots[1], 1e-3);
  EXPECT_EQ(labels[static_cast<std::size_t>((3.0 + 10.0) / 1e-3)], 1);
  EXPECT_EQ(labels.front(), 0);
  EXPECT_EQ(labels.back(), 0);
}

TEST(GmmDecide, AffineMapOfDataKeepsLabels) {
  Rng rng(4);
  const auto x = testing::planted_sad(rng, 3000).values;
  std::vector<double> y = x;
  for (double& v : y) v = 0.5 * v - 4.0;
  EXPECT_EQ(gmm_decide(fit_em(x), x), gmm_decide(fit_em(y), y));
}

}  // namespace
}  // namespace dipsad
