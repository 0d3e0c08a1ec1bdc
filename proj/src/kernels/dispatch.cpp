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

#include <atomic>
#include <cstdlib>
#include <string>

#include "daf/common/error.hpp"
#include "daf/kernels/kernels.hpp"
#include "variants.hpp"

namespace daf::kernels {
namespace {

Isa best_hardware_isa() {
#if defined(DAF_HAVE_AVX2_VARIANT)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::kAvx2;
#endif
#if defined(DAF_HAVE_NEON_VARIANT)
  return Isa::kNeon;
#endif
  return Isa::kScalar;
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detected_isa()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  if (isa == Isa::kScalar) return true;
  return isa == best_hardware_isa();
}

Isa detected_isa() {
  if (const char* env = std::getenv("DAF_ISA"); env != nullptr && std::string(env) == "scalar") {
    return Isa::kScalar;
  }
  return best_hardware_isa();
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw ContractError("kernel variant '" + std::string(isa_name(isa)) +
                        "' is not supported on this CPU");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

template <class T>
const KernelTable<T>& table(Isa isa) {
  switch (isa) {
#if defined(DAF_HAVE_AVX2_VARIANT)
    case Isa::kAvx2: return detail::avx2_table<T>();
#endif
#if defined(DAF_HAVE_NEON_VARIANT)
    case Isa::kNeon: return detail::neon_table<T>();
#endif
    default: return detail::scalar_table<T>();
  }
}

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw ContractError("dot: length mismatch");
  return active<T>().dot(a.data(), b.data(), a.size());
}

template <class T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
  if (x.size() != y.size()) throw ContractError("axpy: length mismatch");
  active<T>().axpy(alpha, x.data(), y.data(), x.size());
}

template <class T>
void gemm_nn(ConstMatrixView<T> a, ConstMatrixView<T> b, MatrixView<T> c) {
  if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols) {
    throw ContractError("gemm_nn: shape mismatch");
  }
  active<T>().gemm_nn(a.rows, b.cols, a.cols, a.data, b.data, c.data);
}

template <class T>
void gemm_nt(ConstMatrixView<T> a, ConstMatrixView<T> b, MatrixView<T> c) {
  if (a.cols != b.cols || c.rows != a.rows || c.cols != b.rows) {
    throw ContractError("gemm_nt: shape mismatch");
  }
  active<T>().gemm_nt(a.rows, b.rows, a.cols, a.data, b.data, c.data);
}

template <class T>
void gemm_tn(ConstMatrixView<T> a, ConstMatrixView<T> b, MatrixView<T> c) {
  if (a.rows != b.rows || c.rows != a.cols || c.cols != b.cols) {
    throw ContractError("gemm_tn: shape mismatch");
  }
  active<T>().gemm_tn(a.cols, b.cols, a.rows, a.data, b.data, c.data);
}

#define DAF_INSTANTIATE(T)                                                      \
  template const KernelTable<T>& table<T>(Isa);                                 \
  template T dot<T>(std::span<const T>, std::span<const T>);                    \
  template void axpy<T>(T, std::span<const T>, std::span<T>);                   \
  template void gemm_nn<T>(ConstMatrixView<T>, ConstMatrixView<T>, MatrixView<T>); \
  template void gemm_nt<T>(ConstMatrixView<T>, ConstMatrixView<T>, MatrixView<T>); \
  template void gemm_tn<T>(ConstMatrixView<T>, ConstMatrixView<T>, MatrixView<T>);

DAF_INSTANTIATE(float)
DAF_INSTANTIATE(double)

#undef DAF_INSTANTIATE

}  // namespace daf::kernels
