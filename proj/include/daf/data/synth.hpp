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

// Synthetic dyads standing in for real parent-child recordings. Each clip
// alternates harmonic tone bursts from speaker A (parent, low F0 band) and
// speaker B (child, high F0 band) with pauses and background noise.
//
// Label rules, per clip and speaker, with RMS amplitude g and relative pitch
// slope s (per second) of that speaker's bursts:
//   arousal = 2 (ln g - ln g_mid) / (ln g_max - ln g_min),  g_mid = sqrt(g_min g_max)
//   valence = s / slope_max
// Child labels (CA, CV) follow speaker B only, parent labels (PA, PV) speaker
// A only. A speaker with no bursts in a clip gets labels 0.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "daf/features/audio.hpp"
#include "daf/features/lld.hpp"

namespace daf::data {

struct Band {
  double lo_hz = 0.0;
  double hi_hz = 0.0;
};

struct SynthConfig {
  std::size_t n_dyads = 30;
  std::size_t clips_per_dyad = 40;
  int sample_rate = 16000;
  double clip_s = 5.0;
  Band parent_band{100.0, 180.0};
  Band child_band{280.0, 450.0};
  double min_segment_s = 0.3;
  double max_segment_s = 1.2;
  // Probability that a burst belongs to the child.
  double child_talk_fraction = 0.3;
  double pause_probability = 0.3;
  double max_pause_s = 0.3;
  double min_rms = 0.02;
  double max_rms = 0.3;
  double max_slope = 0.2;  // relative F0 change per second
  double max_harmonic_hz = 3000.0;
  double noise_rms = 0.003;
  // Multiplies the drawn child RMS before labelling and rendering.
  double child_gain = 1.0;
  std::size_t raters = 3;
  double rater_noise = 0.35;
  std::uint64_t seed = 0;
  features::FrameSpec frames{};

  void validate() const;
  double arousal_label(double rms) const;
};

struct SynthClip {
  std::string instance_id;
  std::string dyad_id;
  features::AudioClip audio;
  std::array<double, 4> labels{};  // CA, PA, CV, PV
  std::vector<std::uint8_t> mask;  // per frame, data::Speaker codes
  // raters x 4 ordinal ratings in {-2, ..., 2}
  std::vector<std::array<double, 4>> ratings;
};

// Deterministic in cfg.seed; clip c of the corpus uses its own RNG streams.
SynthClip synth_clip(const SynthConfig& cfg, std::size_t dyad, std::size_t clip);
std::vector<SynthClip> synth_generate(const SynthConfig& cfg);

// Per-frame speaker codes for sample-level activity (0 A, 1 B, -1 none): a
// frame belongs to a speaker active on at least half of its window.
std::vector<std::uint8_t> frame_mask(const std::vector<std::int8_t>& activity, std::size_t window,
                                     std::size_t hop);

// Toy regression task on feature matrices: Gaussian descriptors whose
// log-energy column carries a per-instance offset; the label is the mean
// log-energy over frames.
struct EnergyTask {
  std::vector<features::FeatureMatrix> inputs;
  std::vector<double> labels;
};
EnergyTask energy_task(std::size_t n, std::size_t frames, std::uint64_t seed);

}  // namespace daf::data
