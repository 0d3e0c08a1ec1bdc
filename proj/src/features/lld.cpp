/* Copyright 2026 The DAF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "daf/features/lld.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <unordered_set>

namespace daf::features {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Regression deltas over +-2 frames with edge replication.
void append_deltas(std::vector<double>& v, std::size_t rows, std::size_t cols, std::size_t src,
                   std::size_t dst) {
  constexpr int kSpan = 2;
  constexpr double kDenom = 2.0 * (1 * 1 + 2 * 2);
  const auto clamp_row = [rows](long t) {
    return static_cast<std::size_t>(std::clamp<long>(t, 0, static_cast<long>(rows) - 1));
  };
  for (std::size_t t = 0; t < rows; ++t) {
    double acc = 0.0;
    for (int n = 1; n <= kSpan; ++n) {
      acc += n * (v[clamp_row(static_cast<long>(t) + n) * cols + src] -
                  v[clamp_row(static_cast<long>(t) - n) * cols + src]);
    }
    v[t * cols + dst] = acc / kDenom;
  }
}

}  // namespace

void FrameSpec::validate() const {
  if (!(hop_ms > 0.0) || !(window_ms >= hop_ms) || !std::isfinite(window_ms)) {
    throw ContractError("frame spec requires 0 < hop_ms <= window_ms");
  }
}

std::size_t FrameSpec::window_samples(int sample_rate) const {
  return static_cast<std::size_t>(std::llround(window_ms * sample_rate / 1000.0));
}

std::size_t FrameSpec::hop_samples(int sample_rate) const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(hop_ms * sample_rate / 1000.0)));
}

std::size_t frame_count(std::size_t n_samples, std::size_t window, std::size_t hop) {
  if (window == 0 || hop == 0 || n_samples < window) return 0;
  return (n_samples - window) / hop + 1;
}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                             std::vector<std::string> names)
    : rows_(rows), cols_(cols), values_(std::move(values)), names_(std::move(names)) {
  if (values_.size() != rows_ * cols_) throw ContractError("feature matrix: size does not match L x D");
  if (names_.size() != cols_) throw ContractError("feature matrix: need one name per descriptor");
  std::unordered_set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw ContractError("feature matrix: descriptor names must be unique");
  for (double v : values_) {
    if (!std::isfinite(v)) throw NumericError("feature matrix: non-finite value");
  }
}

const std::vector<std::string>& descriptor_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n{"log_energy", "zcr"};
    for (std::size_t i = 0; i < lld::kNumMfcc; ++i) n.push_back("mfcc_" + std::to_string(i));
    n.insert(n.end(), {"spectral_centroid", "spectral_flux", "spectral_rolloff", "spectral_entropy",
                       "f0", "voicing_prob", "delta_log_energy"});
    for (std::size_t i = 0; i < lld::kNumMfcc; ++i) n.push_back("delta_mfcc_" + std::to_string(i));
    return n;
  }();
  return names;
}

struct LldExtractor::Impl {
  int sample_rate;
  std::size_t window;
  std::size_t hop;
  std::size_t nfft;
  std::size_t nacf;  // autocorrelation transform size, >= 2 * window
  std::vector<double> hamming;
  std::vector<double> mel_weights;  // kMelFilters x (nfft/2 + 1)
  std::vector<double> dct;          // kNumMfcc x kMelFilters
  std::size_t min_lag;
  std::size_t max_lag;
  fftw_plan spectrum_plan = nullptr;
  fftw_plan acf_forward = nullptr;
  fftw_plan acf_inverse = nullptr;

  std::size_t bins() const { return nfft / 2 + 1; }
};

LldExtractor::LldExtractor(int sample_rate, FrameSpec spec) : impl_(std::make_unique<Impl>()) {
  spec.validate();
  if (sample_rate <= 0) throw ContractError("sample rate must be positive");
  Impl& m = *impl_;
  m.sample_rate = sample_rate;
  m.window = spec.window_samples(sample_rate);
  m.hop = spec.hop_samples(sample_rate);
  if (m.window < 2) throw ContractError("analysis window must span at least two samples");
  m.nfft = next_pow2(m.window);
  m.nacf = next_pow2(2 * m.window);

  m.hamming.resize(m.window);
  for (std::size_t n = 0; n < m.window; ++n) {
    m.hamming[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (m.window - 1));
  }

  const std::size_t bins = m.bins();
  const double nyquist = sample_rate / 2.0;
  std::vector<double> edges(lld::kMelFilters + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(hz_to_mel(nyquist) * i / (lld::kMelFilters + 1));
  }
  m.mel_weights.assign(lld::kMelFilters * bins, 0.0);
  for (std::size_t f = 0; f < lld::kMelFilters; ++f) {
    const double lo = edges[f], mid = edges[f + 1], hi = edges[f + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double hz = static_cast<double>(k) * sample_rate / m.nfft;
      double w = 0.0;
      if (hz > lo && hz <= mid) w = (hz - lo) / (mid - lo);
      else if (hz > mid && hz < hi) w = (hi - hz) / (hi - mid);
      m.mel_weights[f * bins + k] = w;
    }
  }

  m.dct.resize(lld::kNumMfcc * lld::kMelFilters);
  for (std::size_t i = 0; i < lld::kNumMfcc; ++i) {
    const double scale = std::sqrt((i == 0 ? 1.0 : 2.0) / lld::kMelFilters);
    for (std::size_t f = 0; f < lld::kMelFilters; ++f) {
      m.dct[i * lld::kMelFilters + f] =
          scale * std::cos(std::numbers::pi * i * (f + 0.5) / lld::kMelFilters);
    }
  }

  m.min_lag = static_cast<std::size_t>(std::floor(sample_rate / lld::kMaxF0Hz));
  m.max_lag = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(sample_rate / lld::kMinF0Hz)),
                                    m.window - 2);
  m.min_lag = std::max<std::size_t>(m.min_lag, 2);

  std::lock_guard lock(planner_mutex());
  std::vector<double> rbuf(m.nacf);
  std::vector<std::complex<double>> cbuf(m.nacf / 2 + 1);
  auto* cptr = reinterpret_cast<fftw_complex*>(cbuf.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  m.spectrum_plan = fftw_plan_dft_r2c_1d(static_cast<int>(m.nfft), rbuf.data(), cptr, flags);
  m.acf_forward = fftw_plan_dft_r2c_1d(static_cast<int>(m.nacf), rbuf.data(), cptr, flags);
  m.acf_inverse = fftw_plan_dft_c2r_1d(static_cast<int>(m.nacf), cptr, rbuf.data(), flags);
}

LldExtractor::~LldExtractor() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->spectrum_plan);
  fftw_destroy_plan(impl_->acf_forward);
  fftw_destroy_plan(impl_->acf_inverse);
}

std::size_t LldExtractor::window() const { return impl_->window; }
std::size_t LldExtractor::hop() const { return impl_->hop; }
std::size_t LldExtractor::fft_size() const { return impl_->nfft; }

FeatureMatrix LldExtractor::extract(const AudioClip& clip) const {
  const Impl& m = *impl_;
  if (clip.sample_rate != m.sample_rate) throw ContractError("extract: clip sample rate differs from extractor");
  const std::size_t rows = frame_count(clip.samples.size(), m.window, m.hop);
  if (rows == 0) throw ContractError("extract: clip is shorter than one analysis window");

  const std::size_t cols = lld::kCount;
  const std::size_t bins = m.bins();
  std::vector<double> out(rows * cols, 0.0);

  std::vector<double> frame(m.window);
  std::vector<double> padded(m.nacf, 0.0);
  std::vector<std::complex<double>> spec(m.nacf / 2 + 1);
  auto* spec_ptr = reinterpret_cast<fftw_complex*>(spec.data());
  std::vector<double> power(bins), mag(bins), prev_norm_mag(bins, 0.0), norm_mag(bins);
  std::vector<double> acf(m.nacf), prefix_sq(m.window + 1);
  std::vector<double> mel(lld::kMelFilters);

  for (std::size_t t = 0; t < rows; ++t) {
    const double* s = clip.samples.data() + t * m.hop;
    double* row = out.data() + t * cols;

    double energy = 0.0;
    std::size_t crossings = 0;
    for (std::size_t n = 0; n < m.window; ++n) {
      energy += s[n] * s[n];
      if (n > 0 && ((s[n] >= 0.0) != (s[n - 1] >= 0.0))) ++crossings;
    }
    row[lld::kLogEnergy] = std::log(lld::kEnergyFloor + energy);
    row[lld::kZcr] = static_cast<double>(crossings) / static_cast<double>(m.window - 1);

    // Spectrum of the Hamming-windowed frame.
    std::fill(padded.begin(), padded.end(), 0.0);
    for (std::size_t n = 0; n < m.window; ++n) padded[n] = s[n] * m.hamming[n];
    fftw_execute_dft_r2c(m.spectrum_plan, padded.data(), spec_ptr);
    double power_sum = 0.0, mag_sum = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      power[k] = std::norm(spec[k]);
      mag[k] = std::sqrt(power[k]);
      power_sum += power[k];
      mag_sum += mag[k];
    }

    for (std::size_t f = 0; f < lld::kMelFilters; ++f) {
      double e = 0.0;
      for (std::size_t k = 0; k < bins; ++k) e += m.mel_weights[f * bins + k] * power[k];
      mel[f] = std::log(std::max(e, lld::kEnergyFloor));
    }
    for (std::size_t i = 0; i < lld::kNumMfcc; ++i) {
      double c = 0.0;
      for (std::size_t f = 0; f < lld::kMelFilters; ++f) c += m.dct[i * lld::kMelFilters + f] * mel[f];
      row[lld::kMfcc0 + i] = c;
    }

    const double bin_hz = static_cast<double>(m.sample_rate) / m.nfft;
    double centroid = 0.0, flux = 0.0, rolloff = 0.0, entropy = 0.0;
    if (mag_sum > 0.0) {
      for (std::size_t k = 0; k < bins; ++k) centroid += k * bin_hz * mag[k];
      centroid /= mag_sum;
    }
    for (std::size_t k = 0; k < bins; ++k) {
      norm_mag[k] = mag_sum > 0.0 ? mag[k] / mag_sum : 0.0;
      if (t > 0) flux += (norm_mag[k] - prev_norm_mag[k]) * (norm_mag[k] - prev_norm_mag[k]);
    }
    flux = std::sqrt(flux);
    prev_norm_mag.swap(norm_mag);
    if (power_sum > 0.0) {
      double cumulative = 0.0;
      for (std::size_t k = 0; k < bins; ++k) {
        cumulative += power[k];
        if (cumulative >= lld::kRolloffFraction * power_sum) {
          rolloff = k * bin_hz;
          break;
        }
      }
      for (std::size_t k = 0; k < bins; ++k) {
        const double p = power[k] / power_sum;
        if (p > 0.0) entropy -= p * std::log2(p);
      }
      entropy /= std::log2(static_cast<double>(bins));
    }
    row[lld::kSpectralCentroid] = centroid;
    row[lld::kSpectralFlux] = flux;
    row[lld::kSpectralRolloff] = rolloff;
    row[lld::kSpectralEntropy] = entropy;

    // Normalized autocorrelation of the mean-removed frame:
    //   r(tau) = sum x[n] x[n+tau] / sqrt(sum_{n<N-tau} x[n]^2 * sum_{n>=tau} x[n]^2)
    double mean = 0.0;
    for (std::size_t n = 0; n < m.window; ++n) mean += s[n];
    mean /= static_cast<double>(m.window);
    std::fill(padded.begin(), padded.end(), 0.0);
    prefix_sq[0] = 0.0;
    for (std::size_t n = 0; n < m.window; ++n) {
      frame[n] = s[n] - mean;
      padded[n] = frame[n];
      prefix_sq[n + 1] = prefix_sq[n] + frame[n] * frame[n];
    }
    fftw_execute_dft_r2c(m.acf_forward, padded.data(), spec_ptr);
    for (auto& c : spec) c = std::norm(c);
    fftw_execute_dft_c2r(m.acf_inverse, spec_ptr, acf.data());
    const double total_sq = prefix_sq[m.window];
    const auto normalized = [&](std::size_t lag) {
      const double head = prefix_sq[m.window - lag];
      const double tail = total_sq - prefix_sq[lag];
      if (!(head > 1e-9 * total_sq) || !(tail > 1e-9 * total_sq)) return 0.0;
      // The unnormalized inverse transform carries a factor nacf.
      return acf[lag] / (static_cast<double>(m.nacf) * std::sqrt(head * tail));
    };

    double best = 0.0;
    for (std::size_t lag = m.min_lag; lag <= m.max_lag; ++lag) best = std::max(best, normalized(lag));
    double f0 = 0.0, voicing = 0.0;
    if (best > 0.0) {
      // First local maximum within 90% of the global one avoids octave-down errors.
      for (std::size_t lag = m.min_lag; lag <= m.max_lag; ++lag) {
        const double r0 = normalized(lag);
        if (r0 < 0.9 * best) continue;
        const double rl = normalized(lag - 1);
        const double rr = normalized(lag + 1);
        if (r0 < rl || r0 < rr) continue;
        double shift = 0.0;
        const double curvature = rl - 2.0 * r0 + rr;
        if (curvature < 0.0) shift = std::clamp(0.5 * (rl - rr) / curvature, -0.5, 0.5);
        voicing = std::clamp(r0, 0.0, 1.0);
        f0 = static_cast<double>(m.sample_rate) / (static_cast<double>(lag) + shift);
        break;
      }
    }
    if (voicing < lld::kVoicingThreshold) f0 = 0.0;
    row[lld::kF0] = f0;
    row[lld::kVoicingProb] = voicing;
  }

  append_deltas(out, rows, cols, lld::kLogEnergy, lld::kDeltaLogEnergy);
  for (std::size_t i = 0; i < lld::kNumMfcc; ++i) {
    append_deltas(out, rows, cols, lld::kMfcc0 + i, lld::kDeltaMfcc0 + i);
  }
  return FeatureMatrix(rows, cols, std::move(out), descriptor_names());
}

FeatureMatrix extract_llds(const AudioClip& clip, const FrameSpec& spec) {
  if (clip.sample_rate <= 0) throw ContractError("extract: invalid sample rate");
  return LldExtractor(clip.sample_rate, spec).extract(clip);
}

}  // namespace daf::features
