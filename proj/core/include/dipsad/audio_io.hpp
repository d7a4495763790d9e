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
#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace dipsad {

inline constexpr int kAnalysisRate = 8000;

struct AudioBuffer {
  std::vector<double> samples;  // mono, in [-1, 1]
  int sample_rate = 0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// RIFF/WAVE with 8/16/24/32-bit integer PCM or 32-bit float; channels are
// averaged to mono. Integer samples are scaled by 1/2^(bits-1) (8-bit data
// is unsigned and re-centred first); float samples are clamped to [-1, 1].
AudioBuffer read_wav(const std::filesystem::path& path);

// 16-bit mono PCM. Samples are clamped to [-1, 1] and rounded to the nearest
// code, so read_wav(write_wav(b)) returns b exactly when b already sits on the
// 16-bit grid.
void write_wav(const std::filesystem::path& path, const AudioBuffer& buf);

// Band-limits below 4 kHz and converts to 8 kHz. Rates below 8 kHz throw.
AudioBuffer resample_to_8k(const AudioBuffer& buf);

// Fixed-length overlapping windows over an owned copy of the signal.
class FrameSequence {
 public:
  FrameSequence() = default;
  FrameSequence(std::vector<double> signal, int sample_rate,
                std::size_t win_len, std::size_t hop_len);

  std::size_t size() const { return count_; }
  bool degenerate() const { return count_ == 0; }
  std::size_t win_len() const { return win_len_; }
  std::size_t hop_len() const { return hop_len_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t total_samples() const { return signal_.size(); }

  std::span<const double> frame(std::size_t i) const {
    return std::span<const double>(signal_).subspan(i * hop_len_, win_len_);
  }
  double start_time(std::size_t i) const {
    return static_cast<double>(i * hop_len_) / sample_rate_;
  }

 private:
  std::vector<double> signal_;
  int sample_rate_ = kAnalysisRate;
  std::size_t win_len_ = 0;
  std::size_t hop_len_ = 0;
  std::size_t count_ = 0;
};

// win_len = round(win_ms * rate / 1000), likewise hop_len. A signal shorter
// than one window yields an empty, degenerate sequence.
FrameSequence frame_signal(const AudioBuffer& buf, double win_ms = 40.0,
                           double hop_ms = 10.0);

}  // namespace dipsad
