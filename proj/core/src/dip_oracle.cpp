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
#include "dipsad/dip_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dipsad/error.hpp"

namespace dipsad {
namespace {

constexpr double kSlack = 1e-12;

struct Point {
  double x;
  double y;
};

// Andrew's monotone chain over points already sorted by distinct x.
std::vector<Point> chain(std::span<const Point> pts, bool lower) {
  std::vector<Point> h;
  for (const Point& p : pts) {
    while (h.size() >= 2) {
      const Point& a = h[h.size() - 2];
      const Point& b = h.back();
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (lower ? cross <= 0.0 : cross >= 0.0) {
        h.pop_back();
      } else {
        break;
      }
    }
    h.push_back(p);
  }
  return h;
}

double eval_chain(const std::vector<Point>& h, double x) {
  if (h.size() == 1) return h.front().y;
  auto it = std::lower_bound(h.begin(), h.end(), x,
                             [](const Point& p, double v) { return p.x < v; });
  if (it == h.begin()) return h.front().y;
  if (it == h.end()) return h.back().y;
  if (it->x == x) return it->y;
  const Point& b = *it;
  const Point& a = *(it - 1);
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

std::optional<double> first_slope(const std::vector<Point>& h) {
  if (h.size() < 2) return std::nullopt;
  return (h[1].y - h[0].y) / (h[1].x - h[0].x);
}

std::optional<double> last_slope(const std::vector<Point>& h) {
  if (h.size() < 2) return std::nullopt;
  const Point& a = h[h.size() - 2];
  const Point& b = h.back();
  return (b.y - a.y) / (b.x - a.x);
}

}  // namespace

double brute_force_dip(std::span<const double> sorted, std::size_t cap) {
  const std::size_t n = sorted.size();
  if (n == 0) throw Error("brute_force_dip: empty sample");
  if (n > cap) {
    throw Error("brute_force_dip: sample size " + std::to_string(n) +
                " exceeds oracle cap " + std::to_string(cap));
  }
  if (n == 1) return 0.0;

  // v[k] distinct values; c[k] = #{x < v[k]}, c[k + 1] = #{x <= v[k]}.
  std::vector<double> v;
  std::vector<double> c{0.0};
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
    v.push_back(sorted[i]);
    c.push_back(static_cast<double>(j + 1));
    i = j + 1;
  }
  const std::size_t m = v.size();
  const double two_n = 2.0 * static_cast<double>(n);
  if (m == 1) return 1.0 / two_n;

  std::vector<Point> bottoms(m), tops(m);
  for (std::size_t k = 0; k < m; ++k) {
    bottoms[k] = {v[k], c[k]};
    tops[k] = {v[k], c[k + 1]};
  }

  // Left costs: minorant over bottoms[0..i] against the tops left of v_i.
  std::vector<double> left_cost(m, 0.0);
  std::vector<std::optional<double>> left_slope(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto h = chain(std::span(bottoms).first(i + 1), true);
    double worst = 0.0;
    for (std::size_t k = 0; k < i; ++k) {
      worst = std::max(worst, c[k + 1] - eval_chain(h, v[k]));
    }
    left_cost[i] = worst;
    left_slope[i] = last_slope(h);
  }
  // Right costs: majorant over tops[j..] against the bottoms right of v_j.
  std::vector<double> right_cost(m, 0.0);
  std::vector<std::optional<double>> right_slope(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto h = chain(std::span(tops).subspan(j), false);
    double worst = 0.0;
    for (std::size_t k = j + 1; k < m; ++k) {
      worst = std::max(worst, eval_chain(h, v[k]) - c[k]);
    }
    right_cost[j] = worst;
    right_slope[j] = first_slope(h);
  }

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double d = std::max(left_cost[i], right_cost[j]);
      if (i == j) {
        // Degenerate modal interval: the fit may carry an atom at v_i, which
        // requires the shifted minorant to end below the shifted majorant.
        if (d <= c[i + 1] - c[i] + kSlack) best = std::min(best, d);
        continue;
      }
      // F jumps at both ends of a non-degenerate interval while the fit is
      // continuous there.
      d = std::max({d, c[i + 1] - c[i], c[j + 1] - c[j]});
      const double from = c[i];
      const double to = c[j + 1];
      const double span_x = v[j] - v[i];
      for (std::size_t k = i + 1; k < j; ++k) {
        const double t = (v[k] - v[i]) / span_x;
        const double chord = from + (to - from) * t;
        d = std::max(d, (c[k + 1] - chord) / (1.0 - t));
        d = std::max(d, (chord - c[k]) / t);
      }
      if (to - from - d < -kSlack) continue;  // segment would decrease
      const double slope = (to - from - d) / span_x;
      // Convex-then-concave fails only if the segment bends down after the
      // minorant and then up into the majorant.
      if (left_slope[i] && right_slope[j] &&
          slope < std::min(*left_slope[i], *right_slope[j]) - kSlack) {
        continue;
      }
      best = std::min(best, d);
    }
  }
  return std::max(best, 1.0) / two_n;
}

}  // namespace dipsad
