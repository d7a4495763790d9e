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
#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <thread>
#include <tuple>

#include "dipsad/dip.hpp"
#include "dipsad/error.hpp"

namespace dipsad {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t n, std::size_t r) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ static_cast<std::uint64_t>(n);
  h = splitmix64(s);
  s = h ^ static_cast<std::uint64_t>(r);
  return splitmix64(s);
}

// Sorted uniforms without sorting: if E_1..E_{n+1} are iid exponential and
// S_k their partial sums, (S_1..S_n) / S_{n+1} has the joint law of the
// order statistics of n iid U(0, 1) draws.
double null_dip(std::size_t n, std::uint64_t stream_seed,
                std::vector<double>& scratch) {
  std::mt19937_64 rng(stream_seed);
  auto exponential = [&rng] {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    return -std::log1p(-u);
  };
  scratch.resize(n);
  double acc = 0.0;
  for (double& v : scratch) {
    acc += exponential();
    v = acc;
  }
  const double total = acc + exponential();
  for (double& v : scratch) v /= total;
  return compute_dip(scratch).dip;
}

}  // namespace

NullDistribution::NullDistribution(std::size_t n, std::size_t replicates,
                                   std::uint64_t seed, unsigned threads)
    : n_(n), dips_(replicates, 0.0) {
  if (n == 0) throw Error("NullDistribution: sample size must be positive");
  if (replicates == 0) throw Error("NullDistribution: need at least one replicate");

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  // Small tables are not worth a thread each.
  const std::size_t work = n * replicates;
  if (work < 200000) threads = 1;
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, replicates));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::vector<double> scratch;
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= replicates) break;
      dips_[r] = null_dip(n, replicate_seed(seed, n, r), scratch);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::sort(dips_.begin(), dips_.end());
}

double NullDistribution::p_value(double dip) const {
  const auto first_ge = std::lower_bound(dips_.begin(), dips_.end(), dip);
  const auto ge = static_cast<double>(dips_.end() - first_ge);
  return (1.0 + ge) / (static_cast<double>(dips_.size()) + 1.0);
}

std::shared_ptr<const NullDistribution> NullDistribution::cached(
    std::size_t n, std::size_t replicates, std::uint64_t seed) {
  using Key = std::tuple<std::size_t, std::size_t, std::uint64_t>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const NullDistribution>> memo;

  const Key key{n, replicates, seed};
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  // Built outside the lock; two racing callers compute identical tables.
  auto table = std::make_shared<const NullDistribution>(n, replicates, seed);
  std::lock_guard lock(mu);
  return memo.try_emplace(key, std::move(table)).first->second;
}

double dip_pvalue(double dip, std::size_t n, std::size_t bootstrap,
                  std::uint64_t seed) {
  if (n < 4) return 1.0;
  if (bootstrap == 0) throw Error("dip_pvalue: bootstrap count must be positive");
  return NullDistribution::cached(n, bootstrap, seed)->p_value(dip);
}

DipResult dip_test(std::span<const double> sorted, std::size_t bootstrap,
                   std::uint64_t seed) {
  const DipStatistic s = compute_dip(sorted);
  DipResult r;
  r.dip = s.dip;
  r.interval = s.interval;
  r.p_value = dip_pvalue(s.dip, sorted.size(), bootstrap, seed);
  return r;
}

}  // namespace dipsad
