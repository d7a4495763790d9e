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
// Two-component 1-D Gaussian mixture with both weights frozen at 0.5.
// Component 1 (the higher mean) is the speech component.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dipsad {

struct GmmOptions {
  double tol = 1e-6;  // stop when (L_new - L_old) / |L_old| < tol
  std::size_t max_iter = 200;
};

struct Gmm1d {
  std::array<double, 2> means{};  // ascending
  std::array<double, 2> vars{};
  std::array<double, 2> weights{0.5, 0.5};
  double var_floor = 0.0;
  double loglik = 0.0;
  std::size_t iterations = 0;
  bool degenerate = false;
  std::vector<double> trace;  // log-likelihood after initialization and each iteration
};

// Deterministic start from the 10th/90th percentiles and the sample
// variance. Fewer than 4 points or a constant sample give a degenerate
// model with both means at the sample mean.
Gmm1d fit_em(std::span<const double> x, const GmmOptions& opt = {});

// log p(x) under the mixture.
double gmm_log_likelihood(const Gmm1d& g, std::span<const double> x);

// 1 where the speech component is strictly more likely, else 0. A
// degenerate model labels everything 0.
std::vector<std::uint8_t> gmm_decide(const Gmm1d& g, std::span<const double> x);

// Points where the two component log-densities are equal, ascending. One
// root for equal variances, two for unequal ones, none if the components
// coincide.
std::vector<double> gmm_decision_roots(const Gmm1d& g);

}  // namespace dipsad
