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
#include "dipsad/dip_cluster.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "dipsad/error.hpp"

namespace dipsad {

const char* to_string(DipNode::Kind k) {
  switch (k) {
    case DipNode::Kind::region: return "region";
    case DipNode::Kind::left_check: return "left_check";
    case DipNode::Kind::right_check: return "right_check";
    case DipNode::Kind::merge_check: return "merge_check";
  }
  return "unknown";
}

namespace {

// Ranges are half-open [a, b) over the sorted sample. Every range boundary
// is placed by value, so a run of tied values is never split.
class ModeFinder {
 public:
  ModeFinder(std::span<const double> v, const ModeOptions& opt) : v_(v), opt_(opt) {}

  std::vector<ModalInterval> run() {
    std::vector<ModalInterval> found = unidip(0, v_.size(), true, 0);
    std::sort(found.begin(), found.end(),
              [](const ModalInterval& x, const ModalInterval& y) { return x.lo_val < y.lo_val; });
    if (opt_.merge_unimodal) merge(found);
    return found;
  }
  std::vector<DipNode> take_trace() { return std::move(trace_); }

 private:
  std::size_t first_ge(double x) const {
    return static_cast<std::size_t>(std::lower_bound(v_.begin(), v_.end(), x) - v_.begin());
  }
  std::size_t first_gt(double x) const {
    return static_cast<std::size_t>(std::upper_bound(v_.begin(), v_.end(), x) - v_.begin());
  }
  ModalInterval whole(std::size_t a, std::size_t b) const {
    return {a, b - 1, v_[a], v_[b - 1]};
  }

  DipNode test(std::size_t a, std::size_t b, DipNode::Kind kind, int depth) {
    const DipResult r = dip_test(v_.subspan(a, b - a), opt_.bootstrap, opt_.seed);
    DipNode node;
    node.kind = kind;
    node.depth = depth;
    node.lo_idx = a;
    node.hi_idx = b - 1;
    node.dip = r.dip;
    node.p_value = r.p_value;
    // Widen to complete tie runs, in global indices.
    node.interval.lo_val = r.interval.lo_val;
    node.interval.hi_val = r.interval.hi_val;
    node.interval.lo_idx = std::max(a, first_ge(r.interval.lo_val));
    node.interval.hi_idx = std::min(b, first_gt(r.interval.hi_val)) - 1;
    trace_.push_back(node);
    return node;
  }

  std::vector<ModalInterval> unidip(std::size_t a, std::size_t b, bool is_modal, int depth) {
    if (b <= a) return {};
    if (b - a < opt_.min_cluster_size) {
      if (is_modal) return {whole(a, b)};
      return {};
    }
    const DipNode node = test(a, b, DipNode::Kind::region, depth);
    if (node.p_value > opt_.alpha) {
      if (is_modal) return {whole(a, b)};
      return {node.interval};
    }

    const std::size_t ma = node.interval.lo_idx;
    const std::size_t mb = node.interval.hi_idx + 1;
    if (ma == a && mb == b) return {whole(a, b)};  // no shrinkage, stop here

    std::vector<ModalInterval> mid = unidip(ma, mb, true, depth + 1);
    double u = mid.front().hi_val, l = mid.front().lo_val;
    double lowest = mid.front().lo_val, highest = mid.front().hi_val;
    for (const auto& m : mid) {
      u = std::min(u, m.hi_val);
      l = std::max(l, m.lo_val);
      lowest = std::min(lowest, m.lo_val);
      highest = std::max(highest, m.hi_val);
    }

    std::vector<ModalInterval> left, right;
    const std::size_t left_end = std::min(b, first_gt(u));
    if (left_end - a >= opt_.min_cluster_size &&
        test(a, left_end, DipNode::Kind::left_check, depth).p_value <= opt_.alpha) {
      left = unidip(a, std::max(a, first_ge(lowest)), false, depth + 1);
    }
    const std::size_t right_begin = std::max(a, first_ge(l));
    if (b - right_begin >= opt_.min_cluster_size &&
        test(right_begin, b, DipNode::Kind::right_check, depth).p_value <= opt_.alpha) {
      right = unidip(std::min(b, first_gt(highest)), b, false, depth + 1);
    }

    std::vector<ModalInterval> out;
    out.reserve(left.size() + mid.size() + right.size());
    out.insert(out.end(), left.begin(), left.end());
    out.insert(out.end(), mid.begin(), mid.end());
    out.insert(out.end(), right.begin(), right.end());
    return out;
  }

  void merge(std::vector<ModalInterval>& iv) {
    std::map<std::pair<std::size_t, std::size_t>, double> tested;
    for (;;) {
      std::size_t best = iv.size();
      double best_p = opt_.alpha;
      for (std::size_t k = 0; k + 1 < iv.size(); ++k) {
        const auto key = std::make_pair(iv[k].lo_idx, iv[k + 1].hi_idx);
        auto it = tested.find(key);
        if (it == tested.end()) {
          const double p = test(key.first, key.second + 1, DipNode::Kind::merge_check, 0).p_value;
          it = tested.emplace(key, p).first;
        }
        if (it->second > best_p) {
          best_p = it->second;
          best = k;
        }
      }
      if (best == iv.size()) return;
      iv[best] = whole(iv[best].lo_idx, iv[best + 1].hi_idx + 1);
      iv.erase(iv.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }
  }

  std::span<const double> v_;
  const ModeOptions& opt_;
  std::vector<DipNode> trace_;
};

}  // namespace

ModeResult find_modes(const SortedSample& s, const ModeOptions& opt) {
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw Error("find_modes: alpha must lie in (0, 1)");
  ModeResult r;
  if (s.size() == 0) return r;
  ModeFinder finder(s.values, opt);
  r.intervals = finder.run();
  r.trace = finder.take_trace();
  return r;
}

ClusterSet assign_frames(std::span<const ModalInterval> intervals,
                         const SortedSample& s, std::span<const double> values) {
  if (intervals.empty()) throw Error("assign_frames: need at least one interval");
  if (values.size() != s.size()) throw Error("assign_frames: sample and values differ in length");
  ClusterSet c;
  c.intervals.assign(intervals.begin(), intervals.end());
  const std::size_t k = c.intervals.size();
  c.assignment.assign(s.size(), 0);
  c.means.assign(k, 0.0);
  c.counts.assign(k, 0);

  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s.values[i];
    // Last interval starting at or below v.
    const auto it = std::upper_bound(c.intervals.begin(), c.intervals.end(), v,
                                     [](double x, const ModalInterval& m) { return x < m.lo_val; });
    std::size_t id = 0;
    if (it == c.intervals.begin()) {
      id = 0;
    } else {
      const std::size_t prev = static_cast<std::size_t>(it - c.intervals.begin()) - 1;
      if (v <= c.intervals[prev].hi_val || prev + 1 == k) {
        id = prev;
      } else {
        const double to_prev = v - c.intervals[prev].hi_val;
        const double to_next = c.intervals[prev + 1].lo_val - v;
        id = to_prev <= to_next ? prev : prev + 1;
      }
    }
    c.assignment[s.perm[i]] = id;
  }
  for (std::size_t f = 0; f < values.size(); ++f) {
    c.means[c.assignment[f]] += values[f];
    ++c.counts[c.assignment[f]];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (c.counts[j] > 0) c.means[j] /= static_cast<double>(c.counts[j]);
  }
  return c;
}

SadDecision decide_speech(const ClusterSet& c, std::span<const double> values,
                          const FallbackBackend& fallback) {
  SadDecision d;
  if (c.size() < 2) {
    d.fallback_used = true;
    if (!fallback) throw Error("decide_speech: unimodal input and no fallback backend");
    d.labels = fallback(values);
    if (d.labels.size() != values.size()) throw Error("decide_speech: fallback returned wrong length");
    return d;
  }
  std::size_t best = 0;
  for (std::size_t j = 1; j < c.size(); ++j) {
    if (c.means[j] > c.means[best]) best = j;
  }
  d.speech_cluster = static_cast<int>(best);
  d.labels.resize(c.assignment.size());
  for (std::size_t f = 0; f < c.assignment.size(); ++f) {
    d.labels[f] = c.assignment[f] == best ? 1 : 0;
  }
  return d;
}

FallbackBackend gmm_fallback(const GmmOptions& opt) {
  return [opt](std::span<const double> x) { return gmm_decide(fit_em(x, opt), x); };
}

std::vector<std::uint8_t> median_smooth(std::span<const std::uint8_t> labels, std::size_t radius) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + (labels[i] ? 1 : 0);
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= radius ? i - radius : 0;
    const std::size_t hi = std::min(n, i + radius + 1);
    const std::size_t ones = prefix[hi] - prefix[lo];
    const std::size_t zeros = (hi - lo) - ones;
    out[i] = ones > zeros ? 1 : (zeros > ones ? 0 : labels[i]);
  }
  return out;
}

}  // namespace dipsad
