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
#include "dipsad/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dipsad {
namespace {

constexpr double kLogHalf = -std::numbers::ln2;

double log_normal(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

double log_add(double a, double b) {
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Linear interpolation between order statistics.
double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

double gmm_log_likelihood(const Gmm1d& g, std::span<const double> x) {
  double ll = 0.0;
  for (double v : x) {
    ll += log_add(std::log(g.weights[0]) + log_normal(v, g.means[0], g.vars[0]),
                  std::log(g.weights[1]) + log_normal(v, g.means[1], g.vars[1]));
  }
  return ll;
}

Gmm1d fit_em(std::span<const double> x, const GmmOptions& opt) {
  Gmm1d g;
  const std::size_t n = x.size();
  if (n == 0) {
    g.degenerate = true;
    g.vars = {1.0, 1.0};
    return g;
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  g.var_floor = 1e-6 * (var + 1e-12);

  const bool constant = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
  if (n < 4 || constant) {
    g.degenerate = true;
    g.means = {constant ? x[0] : mean, constant ? x[0] : mean};
    g.vars = {std::max(var, g.var_floor), std::max(var, g.var_floor)};
    g.loglik = gmm_log_likelihood(g, x);
    g.trace.push_back(g.loglik);
    return g;
  }

  const std::vector<double> copy(x.begin(), x.end());
  g.means = {percentile(copy, 0.10), percentile(copy, 0.90)};
  g.vars = {std::max(var, g.var_floor), std::max(var, g.var_floor)};
  g.loglik = gmm_log_likelihood(g, x);
  g.trace.push_back(g.loglik);

  std::vector<double> resp(n);
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    // E step: posterior of the upper component.
    for (std::size_t i = 0; i < n; ++i) {
      const double l0 = kLogHalf + log_normal(x[i], g.means[0], g.vars[0]);
      const double l1 = kLogHalf + log_normal(x[i], g.means[1], g.vars[1]);
      resp[i] = std::exp(l1 - log_add(l0, l1));
    }
    // M step on means and variances only; weights stay at 0.5.
    Gmm1d next = g;
    for (int k = 0; k < 2; ++k) {
      double w = 0.0, s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = k == 1 ? resp[i] : 1.0 - resp[i];
        w += r;
        s += r * x[i];
      }
      if (!(w > 0.0)) continue;  // component lost all mass; keep it where it was
      const double m = s / w;
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = k == 1 ? resp[i] : 1.0 - resp[i];
        ss += r * (x[i] - m) * (x[i] - m);
      }
      next.means[static_cast<std::size_t>(k)] = m;
      next.vars[static_cast<std::size_t>(k)] = std::max(ss / w, g.var_floor);
    }
    next.loglik = gmm_log_likelihood(next, x);
    const double gain = next.loglik - g.loglik;
    g.means = next.means;
    g.vars = next.vars;
    g.loglik = next.loglik;
    g.iterations = it + 1;
    g.trace.push_back(g.loglik);
    if (gain < opt.tol * std::abs(g.loglik)) break;
  }

  if (g.means[0] > g.means[1]) {
    std::swap(g.means[0], g.means[1]);
    std::swap(g.vars[0], g.vars[1]);
  }
  return g;
}

std::vector<std::uint8_t> gmm_decide(const Gmm1d& g, std::span<const double> x) {
  std::vector<std::uint8_t> labels(x.size(), 0);
  if (g.degenerate) return labels;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double l0 = log_normal(x[i], g.means[0], g.vars[0]);
    const double l1 = log_normal(x[i], g.means[1], g.vars[1]);
    labels[i] = l1 > l0 ? 1 : 0;
  }
  return labels;
}

std::vector<double> gmm_decision_roots(const Gmm1d& g) {
  // (x-m0)^2/v0 - (x-m1)^2/v1 + log(v0/v1) = 0, as a x^2 + b x + c = 0.
  const double m0 = g.means[0], m1 = g.means[1];
  const double v0 = g.vars[0], v1 = g.vars[1];
  const double a = 1.0 / v0 - 1.0 / v1;
  const double b = 2.0 * (m1 / v1 - m0 / v0);
  const double c = m0 * m0 / v0 - m1 * m1 / v1 + std::log(v0 / v1);
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r;
  if (q != 0.0) r = {q / a, c / q};
  else r = {0.0};
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace dipsad
