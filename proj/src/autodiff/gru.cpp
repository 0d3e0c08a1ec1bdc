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

#include <algorithm>
#include <cmath>
#include <memory>

#include "daf/autodiff/ops.hpp"
#include "daf/common/error.hpp"
#include "daf/kernels/kernels.hpp"

namespace daf::ad {
namespace {

template <class T>
T sigmoid(T v) {
  return T(1) / (T(1) + std::exp(-v));
}

struct GruDims {
  std::size_t k;
  std::size_t h;
};

template <class T>
GruDims check_gru(const Tape<T>& tape, const GruVars& w) {
  const Shape& wi = tape.shape(w.w_input);
  if (wi.size() != 2 || wi[1] % 3 != 0 || wi[1] == 0) throw ContractError("gru: w_input must be [K x 3H]");
  const std::size_t k = wi[0], h = wi[1] / 3;
  if (tape.shape(w.w_hidden_gates) != Shape{h, 2 * h} || tape.shape(w.w_hidden_cand) != Shape{h, h} ||
      tape.shape(w.bias) != Shape{3 * h}) {
    throw ContractError("gru: recurrent weights must be [H x 2H], [H x H] and bias [3H] for H = " +
                        std::to_string(h));
  }
  return {k, h};
}

}  // namespace

template <class T>
Var gru_cell(Tape<T>& tape, Var x, Var h_prev, const GruVars& w) {
  const auto [k, h] = check_gru(tape, w);
  if (tape.shape(x) != Shape{k} || tape.shape(h_prev) != Shape{h}) {
    throw ContractError("gru_cell: expected x[" + std::to_string(k) + "] and h[" + std::to_string(h) + "], got x" +
                        shape_str(tape.shape(x)) + " h" + shape_str(tape.shape(h_prev)));
  }
  const auto xv = tape.value(x).data();
  const auto hv = tape.value(h_prev).data();
  const auto wi = tape.value(w.w_input).data();
  const auto ug = tape.value(w.w_hidden_gates).data();
  const auto uc = tape.value(w.w_hidden_cand).data();
  const auto bv = tape.value(w.bias).data();

  struct Saved {
    std::vector<T> z, r, c, rh;
  };
  auto s = std::make_shared<Saved>();
  s->z.resize(h);
  s->r.resize(h);
  s->c.resize(h);
  s->rh.resize(h);
  std::vector<T> out(h);
  for (std::size_t j = 0; j < h; ++j) {
    T az = bv[j], ar = bv[h + j];
    for (std::size_t i = 0; i < k; ++i) {
      az += xv[i] * wi[i * 3 * h + j];
      ar += xv[i] * wi[i * 3 * h + h + j];
    }
    for (std::size_t i = 0; i < h; ++i) {
      az += hv[i] * ug[i * 2 * h + j];
      ar += hv[i] * ug[i * 2 * h + h + j];
    }
    s->z[j] = sigmoid(az);
    s->r[j] = sigmoid(ar);
  }
  for (std::size_t i = 0; i < h; ++i) s->rh[i] = s->r[i] * hv[i];
  for (std::size_t j = 0; j < h; ++j) {
    T ac = bv[2 * h + j];
    for (std::size_t i = 0; i < k; ++i) ac += xv[i] * wi[i * 3 * h + 2 * h + j];
    for (std::size_t i = 0; i < h; ++i) ac += s->rh[i] * uc[i * h + j];
    s->c[j] = std::tanh(ac);
    out[j] = (T(1) - s->z[j]) * hv[j] + s->z[j] * s->c[j];
  }

  const GruVars wc = w;
  return tape.record(
      Tensor<T>({h}, std::move(out)), {x, h_prev, w.w_input, w.w_hidden_gates, w.w_hidden_cand, w.bias},
      [x, h_prev, wc, k, h, s](Tape<T>& tp, Var o) {
        const auto g = tp.grad(o);
        const auto xv = tp.value(x).data();
        const auto hv = tp.value(h_prev).data();
        const auto wi = tp.value(wc.w_input).data();
        const auto ug = tp.value(wc.w_hidden_gates).data();
        const auto uc = tp.value(wc.w_hidden_cand).data();
        // Pre-activation gradients in gate order (z, r, c).
        std::vector<T> da(3 * h, T(0)), dh(h, T(0)), drh(h, T(0));
        for (std::size_t j = 0; j < h; ++j) {
          const T dz = g[j] * (s->c[j] - hv[j]);
          const T dc = g[j] * s->z[j];
          dh[j] += g[j] * (T(1) - s->z[j]);
          da[j] = dz * s->z[j] * (T(1) - s->z[j]);
          da[2 * h + j] = dc * (T(1) - s->c[j] * s->c[j]);
        }
        for (std::size_t i = 0; i < h; ++i) {
          for (std::size_t j = 0; j < h; ++j) drh[i] += da[2 * h + j] * uc[i * h + j];
        }
        for (std::size_t i = 0; i < h; ++i) {
          da[h + i] = drh[i] * hv[i] * s->r[i] * (T(1) - s->r[i]);
          dh[i] += drh[i] * s->r[i];
        }
        for (std::size_t i = 0; i < h; ++i) {
          for (std::size_t j = 0; j < 2 * h; ++j) dh[i] += da[j] * ug[i * 2 * h + j];
        }
        if (tp.requires_grad(h_prev)) {
          auto gh = tp.grad(h_prev);
          for (std::size_t i = 0; i < h; ++i) gh[i] += dh[i];
        }
        if (tp.requires_grad(x)) {
          auto gx = tp.grad(x);
          for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < 3 * h; ++j) gx[i] += da[j] * wi[i * 3 * h + j];
          }
        }
        if (tp.requires_grad(wc.w_input)) {
          auto gw = tp.grad(wc.w_input);
          for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < 3 * h; ++j) gw[i * 3 * h + j] += xv[i] * da[j];
          }
        }
        if (tp.requires_grad(wc.w_hidden_gates)) {
          auto gu = tp.grad(wc.w_hidden_gates);
          for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < 2 * h; ++j) gu[i * 2 * h + j] += hv[i] * da[j];
          }
        }
        if (tp.requires_grad(wc.w_hidden_cand)) {
          auto gu = tp.grad(wc.w_hidden_cand);
          for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < h; ++j) gu[i * h + j] += s->rh[i] * da[2 * h + j];
          }
        }
        if (tp.requires_grad(wc.bias)) {
          auto gb = tp.grad(wc.bias);
          for (std::size_t j = 0; j < 3 * h; ++j) gb[j] += da[j];
        }
      });
}

template <class T>
Var gru_sequence(Tape<T>& tape, Var x, const GruVars& w, bool reverse) {
  const auto [k, h] = check_gru(tape, w);
  const Shape& xs = tape.shape(x);
  if (xs.size() != 3 || xs[2] != k) {
    throw ContractError("gru_sequence: expected input [B x L x " + std::to_string(k) + "], got " + shape_str(xs));
  }
  const std::size_t b = xs[0], len = xs[1];
  if (len == 0 || b == 0) throw ContractError("gru_sequence: empty batch or sequence");
  const std::size_t rows = b * len;
  const std::size_t h3 = 3 * h;
  const auto& kt = kernels::active<T>();

  const T* xv = tape.value(x).data().data();
  const T* wi = tape.value(w.w_input).data().data();
  const T* ug = tape.value(w.w_hidden_gates).data().data();
  const T* uc = tape.value(w.w_hidden_cand).data().data();
  const auto bv = tape.value(w.bias).data();

  // Input projections for every (b, t) at once: rows ordered b * len + t.
  std::vector<T> proj(rows * h3);
  for (std::size_t r = 0; r < rows; ++r) std::copy(bv.begin(), bv.end(), proj.begin() + r * h3);
  kt.gemm_nn(rows, h3, k, xv, wi, proj.data());

  // Per-step saved state, laid out [step][b][h].
  struct Saved {
    std::vector<T> z, r, c, hprev, rh;
  };
  auto s = std::make_shared<Saved>();
  for (auto* v : {&s->z, &s->r, &s->c, &s->hprev, &s->rh}) v->resize(len * b * h);

  std::vector<T> out(rows * h);
  std::vector<T> hcur(b * h, T(0)), gates(b * 2 * h), cand(b * h);
  for (std::size_t step = 0; step < len; ++step) {
    const std::size_t t = reverse ? len - 1 - step : step;
    T* hp = s->hprev.data() + step * b * h;
    T* zs = s->z.data() + step * b * h;
    T* rs = s->r.data() + step * b * h;
    T* cs = s->c.data() + step * b * h;
    T* rhs = s->rh.data() + step * b * h;
    std::copy(hcur.begin(), hcur.end(), hp);
    for (std::size_t i = 0; i < b; ++i) {
      const T* pr = proj.data() + (i * len + t) * h3;
      std::copy(pr, pr + 2 * h, gates.begin() + i * 2 * h);
      std::copy(pr + 2 * h, pr + h3, cand.begin() + i * h);
    }
    kt.gemm_nn(b, 2 * h, h, hp, ug, gates.data());
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = 0; j < h; ++j) {
        zs[i * h + j] = sigmoid(gates[i * 2 * h + j]);
        rs[i * h + j] = sigmoid(gates[i * 2 * h + h + j]);
        rhs[i * h + j] = rs[i * h + j] * hp[i * h + j];
      }
    }
    kt.gemm_nn(b, h, h, rhs, uc, cand.data());
    for (std::size_t i = 0; i < b; ++i) {
      T* o = out.data() + (i * len + t) * h;
      for (std::size_t j = 0; j < h; ++j) {
        const std::size_t q = i * h + j;
        cs[q] = std::tanh(cand[q]);
        hcur[q] = (T(1) - zs[q]) * hp[q] + zs[q] * cs[q];
        o[j] = hcur[q];
      }
    }
  }

  const GruVars wc = w;
  return tape.record(
      Tensor<T>({b, len, h}, std::move(out)), {x, w.w_input, w.w_hidden_gates, w.w_hidden_cand, w.bias},
      [x, wc, k, h, b, len, reverse, s](Tape<T>& tp, Var o) {
        const auto& kt = kernels::active<T>();
        const std::size_t rows = b * len;
        const std::size_t h3 = 3 * h;
        const auto g = tp.grad(o);
        const T* ug = tp.value(wc.w_hidden_gates).data().data();
        const T* uc = tp.value(wc.w_hidden_cand).data().data();

        std::vector<T> dproj(rows * h3, T(0));   // rows ordered b * len + t
        std::vector<T> dgates(len * b * 2 * h);  // [step][b][2h]
        std::vector<T> dcand(len * b * h);       // [step][b][h]
        std::vector<T> carry(b * h, T(0)), dh(b * h), drh(b * h);
        for (std::size_t step = len; step-- > 0;) {
          const std::size_t t = reverse ? len - 1 - step : step;
          const std::size_t base = step * b * h;
          const T* zs = s->z.data() + base;
          const T* rs = s->r.data() + base;
          const T* cs = s->c.data() + base;
          const T* hp = s->hprev.data() + base;
          T* dg = dgates.data() + step * b * 2 * h;
          T* dc = dcand.data() + base;
          for (std::size_t i = 0; i < b; ++i) {
            for (std::size_t j = 0; j < h; ++j) {
              const std::size_t q = i * h + j;
              const T d = g[(i * len + t) * h + j] + carry[q];
              dg[i * 2 * h + j] = d * (cs[q] - hp[q]) * zs[q] * (T(1) - zs[q]);
              dc[q] = d * zs[q] * (T(1) - cs[q] * cs[q]);
              dh[q] = d * (T(1) - zs[q]);
            }
          }
          std::fill(drh.begin(), drh.end(), T(0));
          kt.gemm_nt(b, h, h, dc, uc, drh.data());
          for (std::size_t q = 0; q < b * h; ++q) {
            const std::size_t i = q / h, j = q % h;
            dg[i * 2 * h + h + j] = drh[q] * hp[q] * rs[q] * (T(1) - rs[q]);
            dh[q] += drh[q] * rs[q];
          }
          kt.gemm_nt(b, h, 2 * h, dg, ug, dh.data());
          for (std::size_t i = 0; i < b; ++i) {
            T* dp = dproj.data() + (i * len + t) * h3;
            std::copy(dg + i * 2 * h, dg + (i + 1) * 2 * h, dp);
            std::copy(dc + i * h, dc + (i + 1) * h, dp + 2 * h);
          }
          carry.swap(dh);
        }

        if (tp.requires_grad(wc.w_hidden_gates)) {
          kt.gemm_tn(h, 2 * h, len * b, s->hprev.data(), dgates.data(), tp.grad(wc.w_hidden_gates).data());
        }
        if (tp.requires_grad(wc.w_hidden_cand)) {
          kt.gemm_tn(h, h, len * b, s->rh.data(), dcand.data(), tp.grad(wc.w_hidden_cand).data());
        }
        if (tp.requires_grad(wc.bias)) {
          auto gb = tp.grad(wc.bias);
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < h3; ++j) gb[j] += dproj[r * h3 + j];
          }
        }
        if (tp.requires_grad(wc.w_input)) {
          kt.gemm_tn(k, h3, rows, tp.value(x).data().data(), dproj.data(), tp.grad(wc.w_input).data());
        }
        if (tp.requires_grad(x)) {
          kt.gemm_nt(rows, k, h3, dproj.data(), tp.value(wc.w_input).data().data(), tp.grad(x).data());
        }
      });
}

template Var gru_cell<float>(Tape<float>&, Var, Var, const GruVars&);
template Var gru_cell<double>(Tape<double>&, Var, Var, const GruVars&);
template Var gru_sequence<float>(Tape<float>&, Var, const GruVars&, bool);
template Var gru_sequence<double>(Tape<double>&, Var, const GruVars&, bool);

}  // namespace daf::ad
