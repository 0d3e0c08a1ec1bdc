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

// ISA-independent blocking for the vector variants. Each variant TU defines a
// traits type V with:
//   using reg; static constexpr std::size_t width;
//   zero(), load(p), store(p, r), broadcast(x), fma(a, b, acc), add(a, b), hsum(r)
// and instantiates Blocks<V>. This header must only be included from a TU
// compiled with the matching target flags.

#include <cstddef>

#include "daf/kernels/kernels.hpp"

namespace daf::kernels::detail {

template <class V>
struct Blocks {
  using T = typename V::scalar;
  using R = typename V::reg;
  static constexpr std::size_t W = V::width;

  static T dot(const T* a, const T* b, std::size_t n) {
    R s0 = V::zero(), s1 = V::zero(), s2 = V::zero(), s3 = V::zero();
    std::size_t i = 0;
    for (; i + 4 * W <= n; i += 4 * W) {
      s0 = V::fma(V::load(a + i), V::load(b + i), s0);
      s1 = V::fma(V::load(a + i + W), V::load(b + i + W), s1);
      s2 = V::fma(V::load(a + i + 2 * W), V::load(b + i + 2 * W), s2);
      s3 = V::fma(V::load(a + i + 3 * W), V::load(b + i + 3 * W), s3);
    }
    for (; i + W <= n; i += W) s0 = V::fma(V::load(a + i), V::load(b + i), s0);
    T s = V::hsum(V::add(V::add(s0, s1), V::add(s2, s3)));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
  }

  static void axpy(T alpha, const T* x, T* y, std::size_t n) {
    const R av = V::broadcast(alpha);
    std::size_t i = 0;
    for (; i + W <= n; i += W) V::store(y + i, V::fma(av, V::load(x + i), V::load(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
  }

  // C rows [0, ROWS) += A(rows, :) * B, with A(r, p) = a[r * rs + p * cs].
  template <std::size_t ROWS>
  static void row_block(std::size_t n, std::size_t k, const T* a, std::size_t rs, std::size_t cs,
                        const T* b, T* c) {
    std::size_t j = 0;
    for (; j + 2 * W <= n; j += 2 * W) {
      R acc0[ROWS], acc1[ROWS];
      for (std::size_t r = 0; r < ROWS; ++r) acc0[r] = acc1[r] = V::zero();
      for (std::size_t p = 0; p < k; ++p) {
        const T* bp = b + p * n + j;
        const R b0 = V::load(bp);
        const R b1 = V::load(bp + W);
        for (std::size_t r = 0; r < ROWS; ++r) {
          const R ar = V::broadcast(a[r * rs + p * cs]);
          acc0[r] = V::fma(ar, b0, acc0[r]);
          acc1[r] = V::fma(ar, b1, acc1[r]);
        }
      }
      for (std::size_t r = 0; r < ROWS; ++r) {
        T* cr = c + r * n + j;
        V::store(cr, V::add(V::load(cr), acc0[r]));
        V::store(cr + W, V::add(V::load(cr + W), acc1[r]));
      }
    }
    for (; j + W <= n; j += W) {
      R acc[ROWS];
      for (std::size_t r = 0; r < ROWS; ++r) acc[r] = V::zero();
      for (std::size_t p = 0; p < k; ++p) {
        const R b0 = V::load(b + p * n + j);
        for (std::size_t r = 0; r < ROWS; ++r) {
          acc[r] = V::fma(V::broadcast(a[r * rs + p * cs]), b0, acc[r]);
        }
      }
      for (std::size_t r = 0; r < ROWS; ++r) {
        T* cr = c + r * n + j;
        V::store(cr, V::add(V::load(cr), acc[r]));
      }
    }
    for (; j < n; ++j) {
      for (std::size_t r = 0; r < ROWS; ++r) {
        T s = 0;
        for (std::size_t p = 0; p < k; ++p) s += a[r * rs + p * cs] * b[p * n + j];
        c[r * n + j] += s;
      }
    }
  }

  static void rank_update(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t rs,
                          std::size_t cs, const T* b, T* c) {
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) row_block<4>(n, k, a + i * rs, rs, cs, b, c + i * n);
    for (; i < m; ++i) row_block<1>(n, k, a + i * rs, rs, cs, b, c + i * n);
  }

  static void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c) {
    rank_update(m, n, k, a, k, 1, b, c);
  }

  static void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c) {
    rank_update(m, n, k, a, 1, m, b, c);
  }

  static void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c) {
    for (std::size_t i = 0; i < m; ++i) {
      const T* ai = a + i * k;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        const T* b0 = b + j * k;
        const T* b1 = b0 + k;
        const T* b2 = b1 + k;
        const T* b3 = b2 + k;
        R s0 = V::zero(), s1 = V::zero(), s2 = V::zero(), s3 = V::zero();
        std::size_t p = 0;
        for (; p + W <= k; p += W) {
          const R av = V::load(ai + p);
          s0 = V::fma(av, V::load(b0 + p), s0);
          s1 = V::fma(av, V::load(b1 + p), s1);
          s2 = V::fma(av, V::load(b2 + p), s2);
          s3 = V::fma(av, V::load(b3 + p), s3);
        }
        T t0 = V::hsum(s0), t1 = V::hsum(s1), t2 = V::hsum(s2), t3 = V::hsum(s3);
        for (; p < k; ++p) {
          t0 += ai[p] * b0[p];
          t1 += ai[p] * b1[p];
          t2 += ai[p] * b2[p];
          t3 += ai[p] * b3[p];
        }
        T* ci = c + i * n + j;
        ci[0] += t0;
        ci[1] += t1;
        ci[2] += t2;
        ci[3] += t3;
      }
      for (; j < n; ++j) c[i * n + j] += dot(ai, b + j * k, k);
    }
  }

  static const KernelTable<T>& table() {
    static const KernelTable<T> t{&dot, &axpy, &gemm_nn, &gemm_nt, &gemm_tn};
    return t;
  }
};

}  // namespace daf::kernels::detail
