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
// Hartigan's dip statistic for 1-D samples.
//
// The dip of a sample is the sup-distance between its empirical CDF and the
// closest unimodal distribution function, where a unimodal distribution is
// convex left of its mode, concave right of it, and may carry an atom at
// the mode. For N >= 2 the reported value is floored at 1/(2N), so an
// all-tied sample has dip 1/(2N); a single point has dip 0.
//
// compute_dip() is the iterative hull-tracking scheme (O(N) after sorting).
// brute_force_dip() in dip_oracle.hpp evaluates the same quantity by direct
// enumeration of candidate modal intervals and is used to check it.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace dipsad {

// Values sorted ascending together with the permutation back to the
// original (unsorted) positions: values[k] == original[perm[k]].
struct SortedSample {
  std::vector<double> values;
  std::vector<std::size_t> perm;

  static SortedSample from_unsorted(std::span<const double> original);
  std::size_t size() const { return values.size(); }
};

// A closed range of the sorted sample; indices are 0-based and inclusive.
struct ModalInterval {
  std::size_t lo_idx = 0;
  std::size_t hi_idx = 0;
  double lo_val = 0.0;
  double hi_val = 0.0;
};

struct DipStatistic {
  double dip = 0.0;
  ModalInterval interval;
};

struct DipResult {
  double dip = 0.0;
  ModalInterval interval;
  double p_value = 1.0;
};

// Contact points of the greatest convex minorant (gcm) and least concave
// majorant (lcm) of the ECDF restricted to sorted[lo..hi]. Entries are
// indices of the first occurrence of each touching distinct value, in
// ascending order. The minorant is taken over left limits F(x-), the
// majorant over F(x), so a jump of the ECDF never lies strictly inside
// either hull.
struct HullContacts {
  std::vector<std::size_t> gcm;
  std::vector<std::size_t> lcm;
};

HullContacts compute_gcm_lcm(std::span<const double> sorted, std::size_t lo,
                             std::size_t hi);

// `sorted` must be non-decreasing; an empty sample throws dipsad::Error.
DipStatistic compute_dip(std::span<const double> sorted);

// Sorted bootstrap dips of n uniform draws on [0, 1]. Replicate r draws from
// a stream derived from (seed, n, r) only, so the table is independent of
// thread scheduling and can be shared between callers.
class NullDistribution {
 public:
  NullDistribution(std::size_t n, std::size_t replicates, std::uint64_t seed,
                   unsigned threads = 0);

  std::size_t n() const { return n_; }
  std::size_t replicates() const { return dips_.size(); }
  std::span<const double> dips() const { return dips_; }

  // (1 + #{null dips >= dip}) / (replicates + 1)
  double p_value(double dip) const;

  // Process-wide memo keyed by (n, replicates, seed).
  static std::shared_ptr<const NullDistribution> cached(std::size_t n,
                                                        std::size_t replicates,
                                                        std::uint64_t seed);

 private:
  std::size_t n_;
  std::vector<double> dips_;
};

// Monte Carlo p-value of an observed dip against the uniform null.
// Samples with n < 4 can never reject and get p = 1.
double dip_pvalue(double dip, std::size_t n, std::size_t bootstrap,
                  std::uint64_t seed);

// compute_dip followed by dip_pvalue on the same sample.
DipResult dip_test(std::span<const double> sorted, std::size_t bootstrap,
                   std::uint64_t seed);

}  // namespace dipsad
