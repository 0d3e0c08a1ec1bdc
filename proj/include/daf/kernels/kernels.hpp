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

// Dense arithmetic kernels behind every matrix product in the network.
//
// Each kernel has a scalar reference implementation and, where the CPU
// supports it, a vectorized variant (AVX2+FMA on x86-64, NEON on AArch64).
// The variant is chosen once at startup from CPUID; DAF_ISA=scalar in the
// environment forces the reference path. Variants agree with the reference to
// rounding (FMA and a different summation order), not bitwise.
//
// All matrices are dense row-major. Every gemm accumulates into C.

#include <cstddef>
#include <span>
#include <string_view>

namespace daf::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
// Best variant available on this machine, honouring DAF_ISA.
Isa detected_isa();
Isa active_isa();
// Throws ContractError when the CPU lacks the requested extension.
void set_active_isa(Isa isa);

template <class T>
struct KernelTable {
  T (*dot)(const T* a, const T* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(T alpha, const T* x, T* y, std::size_t n);
  // C[m x n] += A[m x k] * B[k x n]
  void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c);
  // C[m x n] += A[m x k] * B[n x k]^T
  void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c);
  // C[m x n] += A[k x m]^T * B[k x n]
  void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c);
};

template <class T>
const KernelTable<T>& table(Isa isa);

template <class T>
const KernelTable<T>& active() {
  return table<T>(active_isa());
}

template <class T>
struct ConstMatrixView {
  const T* data;
  std::size_t rows;
  std::size_t cols;
};

template <class T>
struct MatrixView {
  T* data;
  std::size_t rows;
  std::size_t cols;
};

// Checked entry points using the active variant.
template <class T>
T dot(std::span<const T> a, std::span<const T> b);
template <class T>
void axpy(T alpha, std::span<const T> x, std::span<T> y);
template <class T>
void gemm_nn(ConstMatrixView<T> a, ConstMatrixView<T> b, MatrixView<T> c);
template <class T>
void gemm_nt(ConstMatrixView<T> a, ConstMatrixView<T> b, MatrixView<T> c);
template <class T>
void gemm_tn(ConstMatrixView<T> a, ConstMatrixView<T> b, MatrixView<T> c);

}  // namespace daf::kernels
