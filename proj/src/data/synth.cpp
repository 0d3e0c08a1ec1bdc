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

#include "daf/data/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "daf/common/error.hpp"
#include "daf/common/rng.hpp"
#include "daf/data/manifest.hpp"

namespace daf::data {

namespace {

enum Stream : std::uint64_t { kDyad = 1, kLayout, kParent, kChild, kNoise, kRaters, kRaterBias, kToy };

Rng stream(const SynthConfig& cfg, Stream s, std::uint64_t index) { return make_stream(mix_seed(cfg.seed, s), index); }

struct Voice {
  double base_hz = 0.0;
  double rms = 0.0;
  double slope = 0.0;
};

Voice draw_voice(const SynthConfig& cfg, Rng& rng, double base_hz) {
  Voice v;
  v.base_hz = base_hz;
  v.rms = std::exp(uniform(rng, std::log(cfg.min_rms), std::log(cfg.max_rms)));
  v.slope = uniform(rng, -cfg.max_slope, cfg.max_slope);
  return v;
}

// Adds one harmonic burst over samples [begin, end).
void render_burst(const SynthConfig& cfg, const Voice& v, std::size_t begin, std::size_t end,
                  std::vector<double>& out) {
  const double sr = cfg.sample_rate;
  const double dur = static_cast<double>(end - begin) / sr;
  const auto harmonics =
      std::max<std::size_t>(1, static_cast<std::size_t>(cfg.max_harmonic_hz / (v.base_hz * std::exp(cfg.max_slope))));
  double norm = 0.0;
  for (std::size_t h = 1; h <= harmonics; ++h) norm += 0.5 / static_cast<double>(h * h);
  const double gain = v.rms / std::sqrt(norm);
  const double ramp = std::min(0.01 * sr, 0.5 * static_cast<double>(end - begin));
  double phase = 0.0;
  for (std::size_t n = begin; n < end; ++n) {
    const double tau = static_cast<double>(n - begin) / sr;
    const double f = v.base_hz * std::exp(v.slope * (tau - 0.5 * dur));
    phase += 2.0 * std::numbers::pi * f / sr;
    if (phase > 2.0 * std::numbers::pi) phase -= 2.0 * std::numbers::pi;
    const double s1 = std::sin(phase), c1 = std::cos(phase);
    double prev = 0.0, cur = s1, acc = 0.0;
    for (std::size_t h = 1; h <= harmonics; ++h) {
      acc += cur / static_cast<double>(h);
      const double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
    }
    double env = 1.0;
    const double from_start = static_cast<double>(n - begin), to_end = static_cast<double>(end - 1 - n);
    const double edge = std::min(from_start, to_end);
    if (edge < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * edge / ramp);
    out[n] += gain * env * acc;
  }
}

double rating(double label, double bias, double noise) {
  return std::clamp(std::round(2.0 * label + bias + noise), -2.0, 2.0);
}

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& m) { throw ContractError("synth config: " + m); };
  if (n_dyads == 0 || clips_per_dyad == 0) fail("need at least one dyad and clip");
  if (sample_rate <= 0 || !(clip_s > 0.0)) fail("sample rate and clip length must be positive");
  for (const Band& b : {parent_band, child_band}) {
    if (!(b.lo_hz > 0.0 && b.lo_hz < b.hi_hz && b.hi_hz < 0.5 * sample_rate)) fail("invalid F0 band");
  }
  if (!(parent_band.hi_hz < child_band.lo_hz || child_band.hi_hz < parent_band.lo_hz)) {
    fail("speaker bands overlap");
  }
  if (!(min_segment_s > 0.0 && min_segment_s <= max_segment_s)) fail("invalid segment length range");
  if (!(child_talk_fraction >= 0.0 && child_talk_fraction <= 1.0)) fail("child talk fraction outside [0, 1]");
  if (!(pause_probability >= 0.0 && pause_probability < 1.0) || !(max_pause_s > 0.0)) fail("invalid pauses");
  if (!(min_rms > 0.0 && min_rms < max_rms)) fail("invalid RMS range");
  if (!(max_slope > 0.0) || !(max_harmonic_hz > 0.0)) fail("slope and harmonic limit must be positive");
  if (!(noise_rms >= 0.0) || !(child_gain > 0.0) || !(rater_noise >= 0.0)) fail("invalid noise or gain");
  if (raters == 0) fail("need at least one rater");
  frames.validate();
}

double SynthConfig::arousal_label(double rms) const {
  const double mid = 0.5 * (std::log(min_rms) + std::log(max_rms));
  return 2.0 * (std::log(rms) - mid) / (std::log(max_rms) - std::log(min_rms));
}

std::vector<std::uint8_t> frame_mask(const std::vector<std::int8_t>& activity, std::size_t window,
                                     std::size_t hop) {
  const std::size_t frames = features::frame_count(activity.size(), window, hop);
  std::vector<std::uint8_t> mask(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    std::size_t a = 0, b = 0;
    for (std::size_t n = t * hop; n < t * hop + window; ++n) {
      a += activity[n] == 0;
      b += activity[n] == 1;
    }
    mask[t] = static_cast<std::uint8_t>(2 * a >= window ? Speaker::kA : 2 * b >= window ? Speaker::kB : Speaker::kSilence);
  }
  return mask;
}

SynthClip synth_clip(const SynthConfig& cfg, std::size_t dyad, std::size_t clip) {
  cfg.validate();
  if (dyad >= cfg.n_dyads || clip >= cfg.clips_per_dyad) throw ContractError("synth: clip index out of range");
  const std::uint64_t index = dyad * cfg.clips_per_dyad + clip;

  Rng dyad_rng = stream(cfg, kDyad, dyad);
  const double parent_base = uniform(dyad_rng, cfg.parent_band.lo_hz * std::exp(cfg.max_slope),
                                     cfg.parent_band.hi_hz * std::exp(-cfg.max_slope));
  const double child_base = uniform(dyad_rng, cfg.child_band.lo_hz * std::exp(cfg.max_slope),
                                    cfg.child_band.hi_hz * std::exp(-cfg.max_slope));
  Rng parent_rng = stream(cfg, kParent, index);
  Rng child_rng = stream(cfg, kChild, index);
  const Voice parent = draw_voice(cfg, parent_rng, parent_base);
  Voice child = draw_voice(cfg, child_rng, child_base);
  child.rms *= cfg.child_gain;

  const auto total = static_cast<std::size_t>(std::llround(cfg.clip_s * cfg.sample_rate));
  std::vector<double> samples(total, 0.0);
  std::vector<std::int8_t> activity(total, -1);
  bool parent_spoke = false, child_spoke = false;
  Rng layout = stream(cfg, kLayout, index);
  std::size_t pos = 0;
  while (pos < total) {
    if (uniform01(layout) < cfg.pause_probability) {
      pos += static_cast<std::size_t>(uniform(layout, 0.05, cfg.max_pause_s) * cfg.sample_rate);
      if (pos >= total) break;
    }
    const auto len = static_cast<std::size_t>(uniform(layout, cfg.min_segment_s, cfg.max_segment_s) * cfg.sample_rate);
    const bool is_child = uniform01(layout) < cfg.child_talk_fraction;
    const std::size_t end = std::min(total, pos + std::max<std::size_t>(len, 1));
    render_burst(cfg, is_child ? child : parent, pos, end, samples);
    std::fill(activity.begin() + static_cast<std::ptrdiff_t>(pos), activity.begin() + static_cast<std::ptrdiff_t>(end),
              static_cast<std::int8_t>(is_child ? 1 : 0));
    (is_child ? child_spoke : parent_spoke) = true;
    pos = end;
  }

  if (cfg.noise_rms > 0.0) {
    Rng noise = stream(cfg, kNoise, index);
    for (double& s : samples) s += cfg.noise_rms * standard_normal(noise);
  }
  // Quantize exactly as a 16-bit WAV round trip would.
  for (double& s : samples) s = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0) / 32768.0;

  SynthClip out;
  char buf[32];
  std::snprintf(buf, sizeof buf, "d%02zu", dyad);
  out.dyad_id = buf;
  std::snprintf(buf, sizeof buf, "d%02zu_c%03zu", dyad, clip);
  out.instance_id = buf;
  out.audio = {std::move(samples), cfg.sample_rate};
  if (child_spoke) {
    out.labels[0] = cfg.arousal_label(child.rms);
    out.labels[2] = child.slope / cfg.max_slope;
  }
  if (parent_spoke) {
    out.labels[1] = cfg.arousal_label(parent.rms);
    out.labels[3] = parent.slope / cfg.max_slope;
  }
  out.mask = frame_mask(activity, cfg.frames.window_samples(cfg.sample_rate), cfg.frames.hop_samples(cfg.sample_rate));

  Rng raters = stream(cfg, kRaters, index);
  for (std::size_t r = 0; r < cfg.raters; ++r) {
    Rng bias_rng = stream(cfg, kRaterBias, r);
    const double bias = uniform(bias_rng, -0.3, 0.3);
    std::array<double, 4> row{};
    for (std::size_t a = 0; a < 4; ++a) row[a] = rating(out.labels[a], bias, cfg.rater_noise * standard_normal(raters));
    out.ratings.push_back(row);
  }
  return out;
}

std::vector<SynthClip> synth_generate(const SynthConfig& cfg) {
  cfg.validate();
  std::vector<SynthClip> out;
  out.reserve(cfg.n_dyads * cfg.clips_per_dyad);
  for (std::size_t d = 0; d < cfg.n_dyads; ++d) {
    for (std::size_t c = 0; c < cfg.clips_per_dyad; ++c) out.push_back(synth_clip(cfg, d, c));
  }
  return out;
}

EnergyTask energy_task(std::size_t n, std::size_t frames, std::uint64_t seed) {
  if (n == 0 || frames == 0) throw ContractError("energy_task: need instances and frames");
  const std::size_t d = features::lld::kCount;
  Rng rng = make_stream(mix_seed(seed, kToy), 0);
  EnergyTask task;
  for (std::size_t i = 0; i < n; ++i) {
    const double offset = standard_normal(rng);
    std::vector<double> v(frames * d);
    double sum = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t j = 0; j < d; ++j) v[t * d + j] = standard_normal(rng);
      double& e = v[t * d + features::lld::kLogEnergy];
      e = offset + 0.5 * e;
      sum += e;
    }
    task.inputs.emplace_back(frames, d, std::move(v), features::descriptor_names());
    task.labels.push_back(sum / static_cast<double>(frames));
  }
  return task;
}

}  // namespace daf::data
