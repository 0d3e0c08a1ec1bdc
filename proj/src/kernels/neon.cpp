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

#include "variants.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include "simd_blocks.hpp"

namespace daf::kernels::detail {
namespace {

struct NeonF32 {
  using scalar = float;
  using reg = float32x4_t;
  static constexpr std::size_t width = 4;
  static reg zero() { return vdupq_n_f32(0.0f); }
  static reg load(const float* p) { return vld1q_f32(p); }
  static void store(float* p, reg r) { vst1q_f32(p, r); }
  static reg broadcast(float x) { return vdupq_n_f32(x); }
  static reg fma(reg a, reg b, reg acc) { return vfmaq_f32(acc, a, b); }
  static reg add(reg a, reg b) { return vaddq_f32(a, b); }
  static float hsum(reg r) { return vaddvq_f32(r); }
};

struct NeonF64 {
  using scalar = double;
  using reg = float64x2_t;
  static constexpr std::size_t width = 2;
  static reg zero() { return vdupq_n_f64(0.0); }
  static reg load(const double* p) { return vld1q_f64(p); }
  static void store(double* p, reg r) { vst1q_f64(p, r); }
  static reg broadcast(double x) { return vdupq_n_f64(x); }
  static reg fma(reg a, reg b, reg acc) { return vfmaq_f64(acc, a, b); }
  static reg add(reg a, reg b) { return vaddq_f64(a, b); }
  static double hsum(reg r) { return vaddvq_f64(r); }
};

}  // namespace

template <>
const KernelTable<float>& neon_table<float>() {
  return Blocks<NeonF32>::table();
}

template <>
const KernelTable<double>& neon_table<double>() {
  return Blocks<NeonF64>::table();
}

}  // namespace daf::kernels::detail

#endif
