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

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "daf/features/audio.hpp"

namespace daf::features {

struct FrameSpec {
  double window_ms = 25.0;
  double hop_ms = 10.0;

  // Throws ContractError unless 0 < hop_ms <= window_ms.
  void validate() const;
  std::size_t window_samples(int sample_rate) const;
  std::size_t hop_samples(int sample_rate) const;
};

// floor((n - window) / hop) + 1, or 0 when the signal is shorter than one window.
std::size_t frame_count(std::size_t n_samples, std::size_t window, std::size_t hop);

// L x D matrix of per-frame descriptors, rows in time order.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  // Validates shape, finiteness and name uniqueness.
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                std::vector<std::string> names);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t t, std::size_t d) const { return values_[t * cols_ + d]; }
  std::span<const double> row(std::size_t t) const {
    return {values_.data() + t * cols_, cols_};
  }
  std::span<const double> values() const { return values_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> names_;
};

// Column layout of extract_llds output.
namespace lld {
inline constexpr std::size_t kLogEnergy = 0;
inline constexpr std::size_t kZcr = 1;
inline constexpr std::size_t kMfcc0 = 2;
inline constexpr std::size_t kNumMfcc = 13;
inline constexpr std::size_t kSpectralCentroid = kMfcc0 + kNumMfcc;
inline constexpr std::size_t kSpectralFlux = kSpectralCentroid + 1;
inline constexpr std::size_t kSpectralRolloff = kSpectralCentroid + 2;
inline constexpr std::size_t kSpectralEntropy = kSpectralCentroid + 3;
inline constexpr std::size_t kF0 = kSpectralCentroid + 4;
inline constexpr std::size_t kVoicingProb = kF0 + 1;
inline constexpr std::size_t kDeltaLogEnergy = kVoicingProb + 1;
inline constexpr std::size_t kDeltaMfcc0 = kDeltaLogEnergy + 1;
inline constexpr std::size_t kCount = kDeltaMfcc0 + kNumMfcc;

inline constexpr double kEnergyFloor = 1e-10;
inline constexpr std::size_t kMelFilters = 26;
inline constexpr double kMinF0Hz = 50.0;
inline constexpr double kMaxF0Hz = 500.0;
inline constexpr double kVoicingThreshold = 0.5;
inline constexpr double kRolloffFraction = 0.85;
}  // namespace lld

const std::vector<std::string>& descriptor_names();

// Frame-level descriptor extraction for a fixed sample rate and frame spec.
// Holds FFT plans and filterbanks; extract() is const and safe to call from
// several threads.
class LldExtractor {
 public:
  LldExtractor(int sample_rate, FrameSpec spec);
  ~LldExtractor();
  LldExtractor(const LldExtractor&) = delete;
  LldExtractor& operator=(const LldExtractor&) = delete;

  FeatureMatrix extract(const AudioClip& clip) const;

  std::size_t window() const;
  std::size_t hop() const;
  std::size_t fft_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

FeatureMatrix extract_llds(const AudioClip& clip, const FrameSpec& spec = {});

}  // namespace daf::features
