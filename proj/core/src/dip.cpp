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
#include "dipsad/dip.hpp"

#include <algorithm>
#include <numeric>

#include "dipsad/error.hpp"

namespace dipsad {

SortedSample SortedSample::from_unsorted(std::span<const double> original) {
  SortedSample s;
  s.perm.resize(original.size());
  std::iota(s.perm.begin(), s.perm.end(), std::size_t{0});
  std::stable_sort(s.perm.begin(), s.perm.end(),
                   [&](std::size_t a, std::size_t b) {
                     return original[a] < original[b];
                   });
  s.values.reserve(original.size());
  for (std::size_t idx : s.perm) s.values.push_back(original[idx]);
  return s;
}

namespace {

struct DistinctEcdf {
  std::vector<double> x;          // distinct abscissae
  std::vector<double> below;      // count strictly below x[k], i.e. N*F(x-)
  std::vector<double> upto;       // count <= x[k], i.e. N*F(x)
  std::vector<std::size_t> first; // first sorted index of x[k]
};

DistinctEcdf distinct_ecdf(std::span<const double> sorted, std::size_t lo,
                           std::size_t hi) {
  DistinctEcdf e;
  std::size_t i = lo;
  while (i <= hi) {
    std::size_t j = i;
    while (j + 1 <= hi && sorted[j + 1] == sorted[i]) ++j;
    e.x.push_back(sorted[i]);
    e.below.push_back(static_cast<double>(i - lo));
    e.upto.push_back(static_cast<double>(j + 1 - lo));
    e.first.push_back(i);
    i = j + 1;
  }
  return e;
}

// Points of (x, y) lying on the lower (sign = +1) or upper (sign = -1) hull.
std::vector<std::size_t> hull_contacts(const std::vector<double>& x,
                                       const std::vector<double>& y,
                                       double sign) {
  const std::size_t m = x.size();
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k < m; ++k) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      // Drop b when it lies on or above the chord a-k (lower hull).
      const double cross = (x[b] - x[a]) * (y[k] - y[a]) -
                           (y[b] - y[a]) * (x[k] - x[a]);
      if (sign * cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }
  // Re-admit collinear points: they touch the hull too.
  std::vector<std::size_t> touching;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t a = hull[h];
    const std::size_t b = hull[h + 1];
    touching.push_back(a);
    for (std::size_t k = a + 1; k < b; ++k) {
      const double lhs = (y[k] - y[a]) * (x[b] - x[a]);
      const double rhs = (y[b] - y[a]) * (x[k] - x[a]);
      if (lhs == rhs) touching.push_back(k);
    }
  }
  if (!hull.empty()) touching.push_back(hull.back());
  return touching;
}

}  // namespace

HullContacts compute_gcm_lcm(std::span<const double> sorted, std::size_t lo,
                             std::size_t hi) {
  if (sorted.empty() || lo > hi || hi >= sorted.size()) {
    throw Error("compute_gcm_lcm: invalid range");
  }
  const DistinctEcdf e = distinct_ecdf(sorted, lo, hi);
  HullContacts out;
  for (std::size_t k : hull_contacts(e.x, e.below, +1.0)) {
    out.gcm.push_back(e.first[k]);
  }
  for (std::size_t k : hull_contacts(e.x, e.upto, -1.0)) {
    out.lcm.push_back(e.first[k]);
  }
  return out;
}

// The iteration below works in count units on 1-based indices: point i of
// the sorted sample owns the ECDF step from i-1 to i. Tied abscissae stay
// separate indices; the hull chains then climb them vertically, which is
// what lets an atom sit at the mode. D holds twice the dip in counts and
// starts at 1, the 1/(2N) floor.
DipStatistic compute_dip(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  if (n == 0) throw Error("compute_dip: empty sample");

  DipStatistic out;
  out.interval = {0, n - 1, sorted.front(), sorted.back()};
  if (n == 1) {
    out.dip = 0.0;
    return out;
  }
  const double two_n = 2.0 * static_cast<double>(n);
  if (sorted.front() == sorted.back()) {
    out.dip = 1.0 / two_n;
    return out;
  }

  using Index = std::ptrdiff_t;
  const Index nn = static_cast<Index>(n);
  std::vector<double> x(n + 1);
  std::copy(sorted.begin(), sorted.end(), x.begin() + 1);
  const auto cnt = [](Index i) { return static_cast<double>(i); };

  // mn[j]: predecessor of j on the convex minorant of points 1..j.
  std::vector<Index> mn(n + 1), mj(n + 1);
  mn[1] = 1;
  for (Index j = 2; j <= nn; ++j) {
    mn[j] = j - 1;
    for (;;) {
      const Index a = mn[j];
      const Index aa = mn[a];
      if (a == 1 || (x[j] - x[a]) * cnt(a - aa) < (x[a] - x[aa]) * cnt(j - a)) {
        break;
      }
      mn[j] = aa;
    }
  }
  // mj[k]: successor of k on the concave majorant of points k..n.
  mj[nn] = nn;
  for (Index k = nn - 1; k >= 1; --k) {
    mj[k] = k + 1;
    for (;;) {
      const Index a = mj[k];
      const Index aa = mj[a];
      if (a == nn || (x[k] - x[a]) * (cnt(a) - cnt(aa)) <
                        (x[a] - x[aa]) * (cnt(k) - cnt(a))) {
        break;
      }
      mj[k] = aa;
    }
  }

  std::vector<Index> gcm(n + 2), lcm(n + 2);
  Index low = 1, high = nn;
  double D = 1.0;

  for (;;) {
    // GCM vertices from high down to low, LCM vertices from low up to high.
    Index l_gcm = 1;
    gcm[1] = high;
    while (gcm[l_gcm] > low) {
      gcm[l_gcm + 1] = mn[gcm[l_gcm]];
      ++l_gcm;
    }
    Index l_lcm = 1;
    lcm[1] = low;
    while (lcm[l_lcm] < high) {
      lcm[l_lcm + 1] = mj[lcm[l_lcm]];
      ++l_lcm;
    }

    // Largest vertical gap between the two hulls, measured at every vertex
    // of either. On an exact tie a gap found at a minorant vertex wins.
    Index ig = l_gcm, ih = l_lcm;
    double d = 0.0;
    bool best_at_gcm = false;
    if (l_gcm != 2 || l_lcm != 2) {
      Index ix = l_gcm - 1, iv = 2;
      do {
        const Index gx = gcm[ix];
        const Index lv = lcm[iv];
        if (gx > lv) {
          // Next vertex comes from the majorant: gap at x[lv].
          const Index g1 = gcm[ix + 1];
          const double dx = cnt(lv - g1 + 1) -
                            (x[lv] - x[g1]) * cnt(gx - g1) / (x[gx] - x[g1]);
          ++iv;
          if (dx > d || (dx == d && !best_at_gcm)) {
            d = dx;
            ig = ix + 1;
            ih = iv - 1;
            best_at_gcm = false;
          }
        } else {
          // Next vertex comes from the minorant: gap at x[gx].
          const Index l1 = lcm[iv - 1];
          const double dx = (x[gx] - x[l1]) * cnt(lv - l1) / (x[lv] - x[l1]) -
                            cnt(gx - l1 - 1);
          --ix;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv;
            best_at_gcm = true;
          }
        }
        if (ix < 1) ix = 1;
        if (iv > l_lcm) iv = l_lcm;
      } while (gcm[ix] != lcm[iv]);
    } else {
      d = 1.0;
    }

    if (d < D) break;

    // Deviation of F from the minorant on [low, x_L^0] and from the
    // majorant on [x_U^0, high].
    double dip_l = 0.0;
    for (Index j = ig; j < l_gcm; ++j) {
      double max_t = 1.0;
      const Index jb = gcm[j + 1];
      const Index je = gcm[j];
      if (je - jb > 1 && x[je] != x[jb]) {
        const double c = cnt(je - jb) / (x[je] - x[jb]);
        for (Index jr = jb; jr <= je; ++jr) {
          const double t = cnt(jr - jb + 1) - (x[jr] - x[jb]) * c;
          max_t = std::max(max_t, t);
        }
      }
      dip_l = std::max(dip_l, max_t);
    }
    double dip_u = 0.0;
    for (Index j = ih; j < l_lcm; ++j) {
      double max_t = 1.0;
      const Index jb = lcm[j];
      const Index je = lcm[j + 1];
      if (je - jb > 1 && x[je] != x[jb]) {
        const double c = cnt(je - jb) / (x[je] - x[jb]);
        for (Index jr = jb; jr <= je; ++jr) {
          const double t = (x[jr] - x[jb]) * c - cnt(jr - jb - 1);
          max_t = std::max(max_t, t);
        }
      }
      dip_u = std::max(dip_u, max_t);
    }
    D = std::max({D, dip_l, dip_u});

    // Without this check the scheme can cycle on a fixed interval.
    if (low == gcm[ig] && high == lcm[ih]) break;
    low = gcm[ig];
    high = lcm[ih];
  }

  out.dip = D / two_n;
  out.interval = {static_cast<std::size_t>(low - 1),
                  static_cast<std::size_t>(high - 1), x[low], x[high]};
  return out;
}

}  // namespace dipsad
