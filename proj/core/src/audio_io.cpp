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
#include "dipsad/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dipsad/error.hpp"

namespace dipsad {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 |
         std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
}
std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const unsigned char* p, const Format& f) {
  switch (f.bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(le16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32: {
      const std::uint32_t u = le32(p);
      if (f.tag == kFormatFloat) {
        const float x = std::bit_cast<float>(u);
        if (!std::isfinite(x)) return 0.0;
        return std::clamp(static_cast<double>(x), -1.0, 1.0);
      }
      return static_cast<std::int32_t>(u) / 2147483648.0;
    }
    default:
      return 0.0;
  }
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open audio file: " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  const std::string where = path.string() + ": ";

  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0) {
    throw Error(where + "not a RIFF/WAVE file");
  }

  Format fmt;
  bool have_fmt = false;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_bytes = 0;
  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const unsigned char* id = data + pos;
    const std::size_t len = le32(data + pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(len, size - body);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (avail < 16) throw Error(where + "fmt chunk too short");
      fmt.tag = le16(data + body);
      fmt.channels = le16(data + body + 2);
      fmt.rate = le32(data + body + 4);
      fmt.block_align = le16(data + body + 12);
      fmt.bits = le16(data + body + 14);
      if (fmt.tag == kFormatExtensible) {
        if (avail < 26) throw Error(where + "extensible fmt chunk too short");
        fmt.tag = le16(data + body + 24);  // first two bytes of the GUID
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      pcm = data + body;
      pcm_bytes = avail;  // tolerate truncated streaming writers
    }
    pos = body + len + (len & 1);
  }
  if (!have_fmt) throw Error(where + "missing fmt chunk");
  if (pcm == nullptr) throw Error(where + "missing data chunk");

  if (fmt.tag != kFormatPcm && fmt.tag != kFormatFloat) {
    throw Error(where + "unsupported codec (format tag " +
                std::to_string(fmt.tag) + ")");
  }
  const bool bits_ok = fmt.tag == kFormatFloat
                           ? fmt.bits == 32
                           : (fmt.bits == 8 || fmt.bits == 16 ||
                              fmt.bits == 24 || fmt.bits == 32);
  if (!bits_ok) {
    throw Error(where + "unsupported sample width " + std::to_string(fmt.bits) +
                " bits");
  }
  if (fmt.channels == 0) throw Error(where + "zero channels");
  if (fmt.rate == 0) throw Error(where + "zero sample rate");
  const std::size_t width = fmt.bits / 8;
  if (fmt.block_align != width * fmt.channels) {
    throw Error(where + "inconsistent block alignment " +
                std::to_string(fmt.block_align));
  }

  AudioBuffer buf;
  buf.sample_rate = static_cast<int>(fmt.rate);
  const std::size_t frames = pcm_bytes / fmt.block_align;
  buf.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p = pcm + i * fmt.block_align;
    double acc = 0.0;
    for (std::size_t c = 0; c < fmt.channels; ++c) acc += decode_sample(p + c * width, fmt);
    buf.samples[i] = acc / fmt.channels;
  }
  return buf;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buf) {
  if (buf.sample_rate <= 0) throw Error("write_wav: sample rate must be positive");
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(buf.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(buf.sample_rate));
  put32(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (double x : buf.samples) {
    const double code = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(code, -32768.0, 32767.0));
    put16(out, static_cast<std::uint16_t>(v));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write audio file: " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error("short write: " + path.string());
}

FrameSequence::FrameSequence(std::vector<double> signal, int sample_rate,
                             std::size_t win_len, std::size_t hop_len)
    : signal_(std::move(signal)),
      sample_rate_(sample_rate),
      win_len_(win_len),
      hop_len_(hop_len) {
  if (win_len_ == 0 || hop_len_ == 0) throw Error("frame and hop lengths must be positive");
  count_ = signal_.size() >= win_len_ ? (signal_.size() - win_len_) / hop_len_ + 1 : 0;
}

FrameSequence frame_signal(const AudioBuffer& buf, double win_ms, double hop_ms) {
  if (!(hop_ms > 0.0) || win_ms < hop_ms) {
    throw Error("frame_signal: need win_ms >= hop_ms > 0");
  }
  if (buf.sample_rate <= 0) throw Error("frame_signal: sample rate must be positive");
  const double per_ms = buf.sample_rate / 1000.0;
  const auto win = static_cast<std::size_t>(std::lround(win_ms * per_ms));
  const auto hop = static_cast<std::size_t>(std::lround(hop_ms * per_ms));
  if (hop == 0) throw Error("frame_signal: hop shorter than one sample");
  return FrameSequence(buf.samples, buf.sample_rate, win, hop);
}

}  // namespace dipsad
