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

#include "daf/kernels/kernels.hpp"

namespace daf::kernels::detail {

template <class T>
const KernelTable<T>& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
#define DAF_HAVE_AVX2_VARIANT 1
template <class T>
const KernelTable<T>& avx2_table();
template <>
const KernelTable<float>& avx2_table<float>();
template <>
const KernelTable<double>& avx2_table<double>();
#endif

#if defined(__aarch64__)
#define DAF_HAVE_NEON_VARIANT 1
template <class T>
const KernelTable<T>& neon_table();
template <>
const KernelTable<float>& neon_table<float>();
template <>
const KernelTable<double>& neon_table<double>();
#endif

}  // namespace daf::kernels::detail
