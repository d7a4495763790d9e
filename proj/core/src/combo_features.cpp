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
#include "dipsad/combo_features.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "dipsad/error.hpp"

namespace dipsad {
namespace {

constexpr std::size_t kFluxFft = 512;

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Linear (non-circular) autocorrelation r[0..max_lag] via zero-padded FFT.
std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  const std::size_t nfft = next_pow2(x.size() + max_lag + 1);
  std::vector<double> padded(nfft, 0.0);
  std::copy(x.begin(), x.end(), padded.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, padded);
  for (auto& c : spec) c = std::norm(c);
  std::vector<double> r;
  fft.inv(r, spec);
  r.resize(max_lag + 1);
  return r;
}

// Peak over lags of r(k) / sqrt(E_head(k) E_tail(k)), where E_head and E_tail
// are the energies of the two overlapping segments at lag k. With that
// normalization an exactly periodic frame scores 1 at its period regardless
// of how many periods fit in the frame.
double peak_normalized_autocorrelation(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n <= kMinLag) return 0.0;
  const std::size_t max_lag = std::min(kMaxLag, n - 1);
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];
  if (prefix[n] == 0.0) return 0.0;

  const std::vector<double> r = autocorrelation(x, max_lag);
  double best = 0.0;
  for (std::size_t k = kMinLag; k <= max_lag; ++k) {
    const double head = prefix[n - k];
    const double tail = prefix[n] - prefix[k];
    const double denom = std::sqrt(head * tail);
    if (!(denom > prefix[n] * 1e-12)) continue;
    best = std::max(best, r[k] / denom);
  }
  return std::clamp(best, 0.0, 1.0);
}

// Levinson-Durbin on r[0..order]; returns a[1..order] with prediction
// x[n] ~ sum_k a[k] x[n-k]. Stops early if the error power collapses.
std::vector<double> levinson(const std::vector<double>& r, int order) {
  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
  std::vector<double> prev(a.size(), 0.0);
  double err = r[0];
  for (int i = 1; i <= order; ++i) {
    if (!(err > 0.0)) break;
    double acc = r[static_cast<std::size_t>(i)];
    for (int j = 1; j < i; ++j) acc -= a[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(i - j)];
    const double k = acc / err;
    prev = a;
    a[static_cast<std::size_t>(i)] = k;
    for (int j = 1; j < i; ++j) {
      a[static_cast<std::size_t>(j)] = prev[static_cast<std::size_t>(j)] - k * prev[static_cast<std::size_t>(i - j)];
    }
    err *= 1.0 - k * k;
  }
  return a;
}

std::vector<double> unit_magnitude_spectrum(std::span<const double> frame,
                                            const std::vector<double>& window) {
  std::vector<double> buf(kFluxFft, 0.0);
  const std::size_t n = std::min(frame.size(), kFluxFft);
  for (std::size_t i = 0; i < n; ++i) buf[i] = frame[i] * window[i];
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, buf);
  std::vector<double> mag(kFluxFft / 2 + 1);
  double norm = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    mag[k] = std::abs(spec[k]);
    norm += mag[k] * mag[k];
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& m : mag) m /= norm;
  }
  return mag;
}

}  // namespace

double harmonicity(std::span<const double> frame) {
  return peak_normalized_autocorrelation(frame);
}

double clarity(std::span<const double> frame) {
  const std::size_t n = frame.size();
  if (n <= kMinLag || energy(frame) == 0.0) return 0.0;
  const std::size_t max_lag = std::min(kMaxLag, n - 1);
  double min_amdf = 1.0;
  for (std::size_t k = kMinLag; k <= max_lag; ++k) {
    double diff = 0.0, mass = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) {
      diff += std::abs(frame[i] - frame[i + k]);
      mass += std::abs(frame[i]) + std::abs(frame[i + k]);
    }
    if (mass > 0.0) min_amdf = std::min(min_amdf, diff / mass);
  }
  return 1.0 - min_amdf;
}

std::vector<double> lpc_residual(std::span<const double> frame, int order) {
  const std::size_t n = frame.size();
  const auto p = static_cast<std::size_t>(order);
  std::vector<double> e(n, 0.0);
  if (n <= p) return e;

  std::vector<double> xw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
    xw[i] = frame[i] * w;
  }
  std::vector<double> r(p + 1, 0.0);
  for (std::size_t k = 0; k <= p; ++k) {
    for (std::size_t i = k; i < n; ++i) r[k] += xw[i] * xw[i - k];
  }
  if (r[0] == 0.0) return e;
  r[0] *= 1.0001;  // white-noise correction keeps the recursion stable
  const std::vector<double> a = levinson(r, order);
  for (std::size_t i = p; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t k = 1; k <= p; ++k) pred += a[k] * frame[i - k];
    e[i] = frame[i] - pred;
  }
  return e;
}

double prediction_gain(std::span<const double> frame) {
  const auto p = static_cast<std::size_t>(kLpcOrder);
  if (frame.size() <= p) return 0.0;
  const double es = energy(frame.subspan(p));
  if (es == 0.0) return 0.0;
  const std::vector<double> e = lpc_residual(frame);
  const double er = std::max(energy(std::span<const double>(e).subspan(p)), es * 1e-10);
  return std::max(0.0, 10.0 * std::log10(es / er));
}

double periodicity(std::span<const double> frame) {
  if (energy(frame) == 0.0) return 0.0;
  const std::vector<double> e = lpc_residual(frame);
  return peak_normalized_autocorrelation(std::span<const double>(e).subspan(kLpcOrder));
}

RawFeatureMatrix extract_raw_features(const FrameSequence& frames) {
  RawFeatureMatrix m;
  m.rows.resize(frames.size());
  m.frame_times.resize(frames.size());
  std::vector<double> hann(frames.win_len());
  for (std::size_t i = 0; i < hann.size(); ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / hann.size());
  }
  std::vector<double> prev_spec(kFluxFft / 2 + 1, 0.0);
  bool have_prev = false;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto x = frames.frame(f);
    m.frame_times[f] = frames.start_time(f);
    FeatureRow& row = m.rows[f];
    if (energy(x) == 0.0) {
      row.fill(0.0);
      std::fill(prev_spec.begin(), prev_spec.end(), 0.0);
      have_prev = true;
      continue;
    }
    row[0] = harmonicity(x);
    row[1] = clarity(x);
    row[2] = prediction_gain(x);
    row[3] = periodicity(x);
    const std::vector<double> spec = unit_magnitude_spectrum(x, hann);
    double flux = 0.0;
    if (have_prev) {
      for (std::size_t k = 0; k < spec.size(); ++k) {
        const double d = spec[k] - prev_spec[k];
        flux += d * d;
      }
      flux = std::sqrt(flux);
    }
    row[4] = flux;
    prev_spec = spec;
    have_prev = true;
  }
  return m;
}

std::vector<double> frame_log_energy(const FrameSequence& frames) {
  std::vector<double> out(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const auto x = frames.frame(f);
    out[f] = std::log(energy(x) / static_cast<double>(x.size()) + 1e-10);
  }
  return out;
}

RawFeatureMatrix mvn_normalize(const RawFeatureMatrix& m) {
  RawFeatureMatrix out = m;
  const std::size_t n = m.size();
  if (n == 0) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t c = 0; c < kNumFeatures; ++c) {
    double mean = 0.0;
    for (const auto& row : m.rows) mean += row[c];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& row : m.rows) var += (row[c] - mean) * (row[c] - mean);
    var /= static_cast<double>(n);
    // Spread at round-off level relative to the values is treated as constant.
    const bool flat = !(var > 1e-24 * (1.0 + mean * mean));
    const double scale = (n < 2 || flat) ? 0.0 : 1.0 / std::sqrt(var);
    for (auto& row : out.rows) {
      const double centred = row[c] - mean;
      row[c] = n < 2 ? centred : centred * scale;
    }
  }
  out.degenerate = n < 2;
  return out;
}

ComboVector pca_first_component(const RawFeatureMatrix& normalized,
                                std::span<const double> log_energy) {
  const std::size_t n = normalized.size();
  if (!log_energy.empty() && log_energy.size() != n) {
    throw Error("pca_first_component: log-energy length does not match frame count");
  }
  ComboVector out;
  out.frame_times = normalized.frame_times;
  out.values.assign(n, 0.0);

  Eigen::Matrix<double, Eigen::Dynamic, static_cast<int>(kNumFeatures)> X(n, kNumFeatures);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < kNumFeatures; ++c) X(i, c) = normalized.rows[i][c];
  }
  if (n == 0 || X.cwiseAbs().maxCoeff() == 0.0) {
    out.degenerate = true;
    return out;
  }
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd centred = X.rowwise() - mean;
  const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) throw Error("pca_first_component: eigensolver failed");
  const Eigen::VectorXd& lambda = es.eigenvalues();  // ascending
  const int top = static_cast<int>(kNumFeatures) - 1;
  const double lmax = lambda(top);
  if (!(lmax > 0.0)) {
    out.degenerate = true;
    return out;
  }

  // Among eigenvectors tied with the largest eigenvalue, take the one whose
  // absolute loadings, in feature order, compare lexicographically largest.
  auto canonical = [](Eigen::VectorXd v) {
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    return v;
  };
  auto abs_key = [](const Eigen::VectorXd& v) {
    std::vector<double> k(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) k[static_cast<std::size_t>(i)] = std::abs(v(i));
    return k;
  };
  Eigen::VectorXd dir = canonical(es.eigenvectors().col(top));
  for (int j = top - 1; j >= 0; --j) {
    if (lmax - lambda(j) > 1e-12 * lmax) break;
    const Eigen::VectorXd cand = canonical(es.eigenvectors().col(j));
    if (abs_key(cand) > abs_key(dir)) dir = cand;
  }

  Eigen::VectorXd proj = centred * dir;
  if (!log_energy.empty()) {
    double le_mean = 0.0;
    for (double v : log_energy) le_mean += v;
    le_mean /= static_cast<double>(n);
    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) cross += proj(static_cast<Eigen::Index>(i)) * (log_energy[i] - le_mean);
    if (cross < 0.0) {
      dir = -dir;
      proj = -proj;
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.values[i] = proj(static_cast<Eigen::Index>(i));
  for (std::size_t c = 0; c < kNumFeatures; ++c) out.direction[c] = dir(static_cast<Eigen::Index>(c));
  out.eigenvalue = lmax;
  return out;
}

void write_feature_tsv(std::ostream& out, const RawFeatureMatrix& raw,
                       const ComboVector& combo) {
  if (raw.size() != combo.values.size()) {
    throw Error("write_feature_tsv: feature and combo lengths differ");
  }
  out << "time";
  for (auto name : kFeatureNames) out << '\t' << name;
  out << "\tcombo\n";
  const auto old_precision = out.precision(10);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out << raw.frame_times[i];
    for (double v : raw.rows[i]) out << '\t' << v;
    out << '\t' << combo.values[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace dipsad
