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

#include "daf/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "daf/common/error.hpp"
#include "daf/kernels/kernels.hpp"

namespace daf::ad {
namespace {

template <class T>
void require_same_shape(const Tape<T>& tape, Var a, Var b, const char* op) {
  if (tape.shape(a) != tape.shape(b)) {
    throw ContractError(std::string(op) + ": shape mismatch " + shape_str(tape.shape(a)) + " vs " +
                        shape_str(tape.shape(b)));
  }
}

template <class T>
void require_rank(const Tape<T>& tape, Var v, std::size_t rank, const char* op) {
  if (tape.shape(v).size() != rank) {
    throw ContractError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                        shape_str(tape.shape(v)));
  }
}

template <class T>
std::vector<T> copy_of(const Tensor<T>& t) {
  return {t.data().begin(), t.data().end()};
}

}  // namespace

template <class T>
Var add(Tape<T>& tape, Var a, Var b) {
  require_same_shape(tape, a, b, "add");
  auto out = copy_of(tape.value(a));
  const auto bv = tape.value(b).data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return tape.record(Tensor<T>(tape.shape(a), std::move(out)), {a, b}, [a, b](Tape<T>& tp, Var o) {
    const auto g = tp.grad(o);
    for (Var in : {a, b}) {
      if (!tp.requires_grad(in)) continue;
      auto gi = tp.grad(in);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    }
  });
}

template <class T>
Var mul(Tape<T>& tape, Var a, Var b) {
  require_same_shape(tape, a, b, "mul");
  auto out = copy_of(tape.value(a));
  const auto bv = tape.value(b).data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return tape.record(Tensor<T>(tape.shape(a), std::move(out)), {a, b}, [a, b](Tape<T>& tp, Var o) {
    const auto g = tp.grad(o);
    const auto av = tp.value(a).data();
    const auto bv = tp.value(b).data();
    if (tp.requires_grad(a)) {
      auto ga = tp.grad(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (tp.requires_grad(b)) {
      auto gb = tp.grad(b);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

template <class T>
Var scale(Tape<T>& tape, Var a, T factor) {
  auto out = copy_of(tape.value(a));
  for (T& v : out) v *= factor;
  return tape.record(Tensor<T>(tape.shape(a), std::move(out)), {a}, [a, factor](Tape<T>& tp, Var o) {
    const auto g = tp.grad(o);
    auto ga = tp.grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += factor * g[i];
  });
}

template <class T>
Var relu(Tape<T>& tape, Var a) {
  auto out = copy_of(tape.value(a));
  for (T& v : out) v = v > T(0) ? v : T(0);
  return tape.record(Tensor<T>(tape.shape(a), std::move(out)), {a}, [a](Tape<T>& tp, Var o) {
    const auto g = tp.grad(o);
    const auto y = tp.value(o).data();
    auto ga = tp.grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (y[i] > T(0)) ga[i] += g[i];
    }
  });
}

template <class T>
Var sum(Tape<T>& tape, Var a) {
  T s = 0;
  for (T v : tape.value(a).data()) s += v;
  return tape.record(Tensor<T>({1}, {s}), {a}, [a](Tape<T>& tp, Var o) {
    const T g = tp.grad(o)[0];
    for (T& gi : tp.grad(a)) gi += g;
  });
}

template <class T>
Var reshape(Tape<T>& tape, Var a, Shape shape) {
  if (shape_size(shape) != tape.value(a).size()) {
    throw ContractError("reshape: cannot view " + shape_str(tape.shape(a)) + " as " + shape_str(shape));
  }
  return tape.record(Tensor<T>(std::move(shape), copy_of(tape.value(a))), {a}, [a](Tape<T>& tp, Var o) {
    const auto g = tp.grad(o);
    auto ga = tp.grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
  });
}

template <class T>
Var concat_last(Tape<T>& tape, Var a, Var b) {
  const Shape& sa = tape.shape(a);
  const Shape& sb = tape.shape(b);
  if (sa.empty() || sa.size() != sb.size() || !std::equal(sa.begin(), sa.end() - 1, sb.begin())) {
    throw ContractError("concat_last: leading axes differ " + shape_str(sa) + " vs " + shape_str(sb));
  }
  const std::size_t na = sa.back(), nb = sb.back();
  const std::size_t rows = na == 0 ? 0 : tape.value(a).size() / na;
  Shape so = sa;
  so.back() = na + nb;
  std::vector<T> out(rows * (na + nb));
  const auto av = tape.value(a).data();
  const auto bv = tape.value(b).data();
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(av.begin() + r * na, na, out.begin() + r * (na + nb));
    std::copy_n(bv.begin() + r * nb, nb, out.begin() + r * (na + nb) + na);
  }
  return tape.record(Tensor<T>(so, std::move(out)), {a, b}, [a, b, rows, na, nb](Tape<T>& tp, Var o) {
    const auto g = tp.grad(o);
    if (tp.requires_grad(a)) {
      auto ga = tp.grad(a);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < na; ++j) ga[r * na + j] += g[r * (na + nb) + j];
      }
    }
    if (tp.requires_grad(b)) {
      auto gb = tp.grad(b);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < nb; ++j) gb[r * nb + j] += g[r * (na + nb) + na + j];
      }
    }
  });
}

template <class T>
Var matmul(Tape<T>& tape, Var a, Var b) {
  require_rank(tape, a, 2, "matmul");
  require_rank(tape, b, 2, "matmul");
  const std::size_t m = tape.shape(a)[0], k = tape.shape(a)[1], n = tape.shape(b)[1];
  if (tape.shape(b)[0] != k) {
    throw ContractError("matmul: inner dimensions differ " + shape_str(tape.shape(a)) + " * " +
                        shape_str(tape.shape(b)));
  }
  std::vector<T> out(m * n, T(0));
  kernels::active<T>().gemm_nn(m, n, k, tape.value(a).data().data(), tape.value(b).data().data(), out.data());
  return tape.record(Tensor<T>({m, n}, std::move(out)), {a, b}, [a, b, m, n, k](Tape<T>& tp, Var o) {
    const auto& kt = kernels::active<T>();
    const T* g = tp.grad(o).data();
    if (tp.requires_grad(a)) kt.gemm_nt(m, k, n, g, tp.value(b).data().data(), tp.grad(a).data());
    if (tp.requires_grad(b)) kt.gemm_tn(k, n, m, tp.value(a).data().data(), g, tp.grad(b).data());
  });
}

template <class T>
Var linear(Tape<T>& tape, Var x, Var w, Var b) {
  require_rank(tape, x, 2, "linear");
  require_rank(tape, w, 2, "linear");
  const std::size_t n = tape.shape(x)[0], k = tape.shape(x)[1], m = tape.shape(w)[1];
  if (tape.shape(w)[0] != k || tape.shape(b) != Shape{m}) {
    throw ContractError("linear: incompatible shapes x" + shape_str(tape.shape(x)) + " w" +
                        shape_str(tape.shape(w)) + " b" + shape_str(tape.shape(b)));
  }
  std::vector<T> out(n * m);
  const auto bias = tape.value(b).data();
  for (std::size_t i = 0; i < n; ++i) std::copy(bias.begin(), bias.end(), out.begin() + i * m);
  kernels::active<T>().gemm_nn(n, m, k, tape.value(x).data().data(), tape.value(w).data().data(), out.data());
  return tape.record(Tensor<T>({n, m}, std::move(out)), {x, w, b}, [x, w, b, n, m, k](Tape<T>& tp, Var o) {
    const auto& kt = kernels::active<T>();
    const auto g = tp.grad(o);
    if (tp.requires_grad(x)) kt.gemm_nt(n, k, m, g.data(), tp.value(w).data().data(), tp.grad(x).data());
    if (tp.requires_grad(w)) kt.gemm_tn(k, m, n, tp.value(x).data().data(), g.data(), tp.grad(w).data());
    if (tp.requires_grad(b)) {
      auto gb = tp.grad(b);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) gb[j] += g[i * m + j];
      }
    }
  });
}

template <class T>
Var conv1d_feature_axis(Tape<T>& tape, Var x, Var kernels, Var bias) {
  require_rank(tape, x, 2, "conv1d_feature_axis");
  require_rank(tape, kernels, 3, "conv1d_feature_axis");
  const std::size_t rows = tape.shape(x)[0], d = tape.shape(x)[1];
  const std::size_t c = tape.shape(kernels)[0], width = tape.shape(kernels)[2];
  if (tape.shape(kernels)[1] != 1 || tape.shape(bias) != Shape{c}) {
    throw ContractError("conv1d_feature_axis: kernels must be [C x 1 x W] with bias [C]");
  }
  if (d < width) {
    throw ContractError("conv1d_feature_axis: feature dimension " + std::to_string(d) +
                        " is smaller than the kernel width " + std::to_string(width));
  }
  const std::size_t dout = d - width + 1;
  const auto xv = tape.value(x).data();
  const auto kv = tape.value(kernels).data();
  const auto bv = tape.value(bias).data();
  std::vector<T> out(rows * c * dout);
  for (std::size_t t = 0; t < rows; ++t) {
    const T* xr = xv.data() + t * d;
    for (std::size_t ch = 0; ch < c; ++ch) {
      const T* kr = kv.data() + ch * width;
      T* o = out.data() + (t * c + ch) * dout;
      for (std::size_t j = 0; j < dout; ++j) {
        T s = bv[ch];
        for (std::size_t q = 0; q < width; ++q) s += kr[q] * xr[j + q];
        o[j] = s;
      }
    }
  }
  return tape.record(
      Tensor<T>({rows, c, dout}, std::move(out)), {x, kernels, bias},
      [x, kernels, bias, rows, d, c, width, dout](Tape<T>& tp, Var o) {
        const auto g = tp.grad(o);
        const auto xv = tp.value(x).data();
        const auto kv = tp.value(kernels).data();
        const bool need_x = tp.requires_grad(x), need_k = tp.requires_grad(kernels);
        std::span<T> gx, gk;
        if (need_x) gx = tp.grad(x);
        if (need_k) gk = tp.grad(kernels);
        if (tp.requires_grad(bias)) {
          auto gb = tp.grad(bias);
          for (std::size_t t = 0; t < rows; ++t) {
            for (std::size_t ch = 0; ch < c; ++ch) {
              const T* go = g.data() + (t * c + ch) * dout;
              for (std::size_t j = 0; j < dout; ++j) gb[ch] += go[j];
            }
          }
        }
        for (std::size_t t = 0; t < rows; ++t) {
          for (std::size_t ch = 0; ch < c; ++ch) {
            const T* go = g.data() + (t * c + ch) * dout;
            for (std::size_t j = 0; j < dout; ++j) {
              for (std::size_t q = 0; q < width; ++q) {
                if (need_k) gk[ch * width + q] += go[j] * xv[t * d + j + q];
                if (need_x) gx[t * d + j + q] += go[j] * kv[ch * width + q];
              }
            }
          }
        }
      });
}

template <class T>
Var maxpool_feature_axis(Tape<T>& tape, Var x, std::size_t width, std::size_t stride) {
  require_rank(tape, x, 3, "maxpool_feature_axis");
  if (width == 0 || stride == 0) throw ContractError("maxpool_feature_axis: width and stride must be positive");
  const std::size_t n = tape.shape(x)[0], c = tape.shape(x)[1], d = tape.shape(x)[2];
  if (d < width) {
    throw ContractError("maxpool_feature_axis: axis length " + std::to_string(d) + " is below the pool width");
  }
  const std::size_t dout = (d - width) / stride + 1;
  const auto xv = tape.value(x).data();
  std::vector<T> out(n * c * dout);
  auto argmax = std::make_shared<std::vector<std::size_t>>(out.size());
  for (std::size_t r = 0; r < n * c; ++r) {
    const T* xr = xv.data() + r * d;
    for (std::size_t i = 0; i < dout; ++i) {
      std::size_t best = i * stride;
      for (std::size_t q = 1; q < width; ++q) {
        if (xr[i * stride + q] > xr[best]) best = i * stride + q;
      }
      out[r * dout + i] = xr[best];
      (*argmax)[r * dout + i] = r * d + best;
    }
  }
  return tape.record(Tensor<T>({n, c, dout}, std::move(out)), {x}, [x, argmax](Tape<T>& tp, Var o) {
    const auto g = tp.grad(o);
    auto gx = tp.grad(x);
    for (std::size_t i = 0; i < g.size(); ++i) gx[(*argmax)[i]] += g[i];
  });
}

namespace {

// Shared body of the batchnorm entry points. In train mode the running
// statistics are updated only when `update_*` are given.
template <class T>
Var batchnorm_impl(Tape<T>& tape, Var x, Var gamma, Var beta, const Tensor<T>& running_mean,
                   const Tensor<T>& running_var, Mode mode, Tensor<T>* update_mean, Tensor<T>* update_var) {
  require_rank(tape, x, 2, "batchnorm");
  const std::size_t n = tape.shape(x)[0], k = tape.shape(x)[1];
  if (tape.shape(gamma) != Shape{k} || tape.shape(beta) != Shape{k} || running_mean.size() != k ||
      running_var.size() != k) {
    throw ContractError("batchnorm: parameter length does not match " + std::to_string(k) + " columns");
  }
  if (mode == Mode::kTrain && n < 2) throw ContractError("batchnorm: train mode needs at least two rows");

  const auto xv = tape.value(x).data();
  const auto gv = tape.value(gamma).data();
  const auto bv = tape.value(beta).data();
  auto xhat = std::make_shared<std::vector<T>>(n * k);
  auto inv_std = std::make_shared<std::vector<T>>(k);
  std::vector<T> mean(k, T(0)), var(k, T(0));
  if (mode == Mode::kTrain) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) mean[j] += xv[i * k + j];
    }
    for (T& m : mean) m /= static_cast<T>(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const T dv = xv[i * k + j] - mean[j];
        var[j] += dv * dv;
      }
    }
    for (T& v : var) v /= static_cast<T>(n);
    const T mom = static_cast<T>(kBatchNormMomentum);
    if (update_mean != nullptr && update_var != nullptr) {
      for (std::size_t j = 0; j < k; ++j) {
        (*update_mean)[j] = mom * (*update_mean)[j] + (T(1) - mom) * mean[j];
        (*update_var)[j] = mom * (*update_var)[j] + (T(1) - mom) * var[j];
      }
    }
  } else {
    std::copy(running_mean.data().begin(), running_mean.data().end(), mean.begin());
    std::copy(running_var.data().begin(), running_var.data().end(), var.begin());
  }
  for (std::size_t j = 0; j < k; ++j) (*inv_std)[j] = T(1) / std::sqrt(var[j] + static_cast<T>(kBatchNormEps));
  std::vector<T> out(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const T h = (xv[i * k + j] - mean[j]) * (*inv_std)[j];
      (*xhat)[i * k + j] = h;
      out[i * k + j] = gv[j] * h + bv[j];
    }
  }
  const bool batch_stats = mode == Mode::kTrain;
  return tape.record(
      Tensor<T>({n, k}, std::move(out)), {x, gamma, beta},
      [x, gamma, beta, n, k, xhat, inv_std, batch_stats](Tape<T>& tp, Var o) {
        const auto g = tp.grad(o);
        const auto gv = tp.value(gamma).data();
        std::vector<T> sum_g(k, T(0)), sum_gx(k, T(0));
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < k; ++j) {
            sum_g[j] += g[i * k + j];
            sum_gx[j] += g[i * k + j] * (*xhat)[i * k + j];
          }
        }
        if (tp.requires_grad(gamma)) {
          auto gg = tp.grad(gamma);
          for (std::size_t j = 0; j < k; ++j) gg[j] += sum_gx[j];
        }
        if (tp.requires_grad(beta)) {
          auto gb = tp.grad(beta);
          for (std::size_t j = 0; j < k; ++j) gb[j] += sum_g[j];
        }
        if (!tp.requires_grad(x)) return;
        auto gx = tp.grad(x);
        const T inv_n = T(1) / static_cast<T>(n);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < k; ++j) {
            const T gi = g[i * k + j];
            const T scale = gv[j] * (*inv_std)[j];
            if (batch_stats) {
              gx[i * k + j] += scale * (gi - inv_n * sum_g[j] - (*xhat)[i * k + j] * inv_n * sum_gx[j]);
            } else {
              gx[i * k + j] += scale * gi;
            }
          }
        }
      });
}

}  // namespace

template <class T>
Var batchnorm(Tape<T>& tape, Var x, Var gamma, Var beta, Tensor<T>& running_mean, Tensor<T>& running_var,
              Mode mode) {
  return batchnorm_impl(tape, x, gamma, beta, running_mean, running_var, mode, &running_mean, &running_var);
}

template <class T>
Var batchnorm_frozen(Tape<T>& tape, Var x, Var gamma, Var beta, const Tensor<T>& running_mean,
                     const Tensor<T>& running_var, Mode mode) {
  return batchnorm_impl<T>(tape, x, gamma, beta, running_mean, running_var, mode, nullptr, nullptr);
}

template <class T>
Var dropout(Tape<T>& tape, Var x, double p, Mode mode, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) throw ContractError("dropout: probability must lie in [0, 1)");
  if (mode == Mode::kInfer || p == 0.0) return x;
  const auto xv = tape.value(x).data();
  auto mask = std::make_shared<std::vector<T>>(xv.size());
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  std::vector<T> out(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) {
    (*mask)[i] = uniform01(rng) < p ? T(0) : keep_scale;
    out[i] = xv[i] * (*mask)[i];
  }
  return tape.record(Tensor<T>(tape.shape(x), std::move(out)), {x}, [x, mask](Tape<T>& tp, Var o) {
    const auto g = tp.grad(o);
    auto gx = tp.grad(x);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (*mask)[i];
  });
}

template <class T>
Var softmax(Tape<T>& tape, Var v) {
  const Shape& s = tape.shape(v);
  if (s.empty() || s.back() == 0) throw ContractError("softmax: empty last axis");
  const std::size_t len = s.back();
  const std::size_t rows = tape.value(v).size() / len;
  const auto xv = tape.value(v).data();
  std::vector<T> out(xv.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = xv.data() + r * len;
    T* yr = out.data() + r * len;
    const T mx = *std::max_element(xr, xr + len);
    T total = 0;
    for (std::size_t i = 0; i < len; ++i) {
      yr[i] = std::exp(xr[i] - mx);
      total += yr[i];
    }
    for (std::size_t i = 0; i < len; ++i) yr[i] /= total;
  }
  return tape.record(Tensor<T>(s, std::move(out)), {v}, [v, rows, len](Tape<T>& tp, Var o) {
    const auto g = tp.grad(o);
    const auto y = tp.value(o).data();
    auto gv = tp.grad(v);
    for (std::size_t r = 0; r < rows; ++r) {
      T inner = 0;
      for (std::size_t i = 0; i < len; ++i) inner += g[r * len + i] * y[r * len + i];
      for (std::size_t i = 0; i < len; ++i) gv[r * len + i] += y[r * len + i] * (g[r * len + i] - inner);
    }
  });
}

template <class T>
Var mean_time(Tape<T>& tape, Var h) {
  require_rank(tape, h, 3, "mean_time");
  const std::size_t b = tape.shape(h)[0], len = tape.shape(h)[1], hd = tape.shape(h)[2];
  if (len == 0) throw ContractError("mean_time: empty sequence");
  const auto hv = tape.value(h).data();
  std::vector<T> out(b * hd, T(0));
  // Accumulates inv * h_t exactly like weighted_time_sum does with uniform
  // weights (softmax of equal logits is exactly 1/L), so the two heads agree
  // bitwise in that case.
  const T inv = T(1) / static_cast<T>(len);
  const auto& kt = kernels::active<T>();
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t t = 0; t < len; ++t) kt.axpy(inv, hv.data() + (i * len + t) * hd, out.data() + i * hd, hd);
  }
  return tape.record(Tensor<T>({b, hd}, std::move(out)), {h}, [h, b, len, hd, inv](Tape<T>& tp, Var o) {
    const auto g = tp.grad(o);
    auto gh = tp.grad(h);
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t t = 0; t < len; ++t) {
        for (std::size_t j = 0; j < hd; ++j) gh[(i * len + t) * hd + j] += inv * g[i * hd + j];
      }
    }
  });
}

template <class T>
Var attention_logits(Tape<T>& tape, Var src, Var w) {
  require_rank(tape, src, 3, "attention_logits");
  const std::size_t b = tape.shape(src)[0], len = tape.shape(src)[1], k = tape.shape(src)[2];
  if (tape.shape(w) != Shape{k}) {
    throw ContractError("attention_logits: attention vector " + shape_str(tape.shape(w)) +
                        " does not match score source width " + std::to_string(k));
  }
  const auto& kt = kernels::active<T>();
  const auto sv = tape.value(src).data();
  const auto wv = tape.value(w).data();
  std::vector<T> out(b * len);
  for (std::size_t r = 0; r < b * len; ++r) out[r] = kt.dot(sv.data() + r * k, wv.data(), k);
  return tape.record(Tensor<T>({b, len}, std::move(out)), {src, w}, [src, w, b, len, k](Tape<T>& tp, Var o) {
    const auto& kt = kernels::active<T>();
    const auto g = tp.grad(o);
    if (tp.requires_grad(src)) {
      auto gs = tp.grad(src);
      const auto wv = tp.value(w).data();
      for (std::size_t r = 0; r < b * len; ++r) kt.axpy(g[r], wv.data(), gs.data() + r * k, k);
    }
    if (tp.requires_grad(w)) {
      auto gw = tp.grad(w);
      const auto sv = tp.value(src).data();
      for (std::size_t r = 0; r < b * len; ++r) kt.axpy(g[r], sv.data() + r * k, gw.data(), k);
    }
  });
}

template <class T>
Var weighted_time_sum(Tape<T>& tape, Var alpha, Var h) {
  require_rank(tape, alpha, 2, "weighted_time_sum");
  require_rank(tape, h, 3, "weighted_time_sum");
  const std::size_t b = tape.shape(h)[0], len = tape.shape(h)[1], hd = tape.shape(h)[2];
  if (tape.shape(alpha) != Shape{b, len}) {
    throw ContractError("weighted_time_sum: weights " + shape_str(tape.shape(alpha)) + " do not match sequence " +
                        shape_str(tape.shape(h)));
  }
  const auto& kt = kernels::active<T>();
  const auto av = tape.value(alpha).data();
  const auto hv = tape.value(h).data();
  std::vector<T> out(b * hd, T(0));
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t t = 0; t < len; ++t) kt.axpy(av[i * len + t], hv.data() + (i * len + t) * hd, out.data() + i * hd, hd);
  }
  return tape.record(Tensor<T>({b, hd}, std::move(out)), {alpha, h}, [alpha, h, b, len, hd](Tape<T>& tp, Var o) {
    const auto& kt = kernels::active<T>();
    const auto g = tp.grad(o);
    if (tp.requires_grad(alpha)) {
      auto ga = tp.grad(alpha);
      const auto hv = tp.value(h).data();
      for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t t = 0; t < len; ++t) ga[i * len + t] += kt.dot(g.data() + i * hd, hv.data() + (i * len + t) * hd, hd);
      }
    }
    if (tp.requires_grad(h)) {
      auto gh = tp.grad(h);
      const auto av = tp.value(alpha).data();
      for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t t = 0; t < len; ++t) kt.axpy(av[i * len + t], g.data() + i * hd, gh.data() + (i * len + t) * hd, hd);
      }
    }
  });
}

#define DAF_INSTANTIATE_OPS(T)                                                                         \
  template Var add<T>(Tape<T>&, Var, Var);                                                             \
  template Var mul<T>(Tape<T>&, Var, Var);                                                             \
  template Var scale<T>(Tape<T>&, Var, T);                                                             \
  template Var relu<T>(Tape<T>&, Var);                                                                 \
  template Var sum<T>(Tape<T>&, Var);                                                                  \
  template Var reshape<T>(Tape<T>&, Var, Shape);                                                       \
  template Var concat_last<T>(Tape<T>&, Var, Var);                                                     \
  template Var matmul<T>(Tape<T>&, Var, Var);                                                          \
  template Var linear<T>(Tape<T>&, Var, Var, Var);                                                     \
  template Var conv1d_feature_axis<T>(Tape<T>&, Var, Var, Var);                                        \
  template Var maxpool_feature_axis<T>(Tape<T>&, Var, std::size_t, std::size_t);                       \
  template Var batchnorm<T>(Tape<T>&, Var, Var, Var, Tensor<T>&, Tensor<T>&, Mode);                    \
  template Var batchnorm_frozen<T>(Tape<T>&, Var, Var, Var, const Tensor<T>&, const Tensor<T>&, Mode);   \
  template Var dropout<T>(Tape<T>&, Var, double, Mode, Rng&);                                          \
  template Var softmax<T>(Tape<T>&, Var);                                                              \
  template Var mean_time<T>(Tape<T>&, Var);                                                            \
  template Var attention_logits<T>(Tape<T>&, Var, Var);                                                \
  template Var weighted_time_sum<T>(Tape<T>&, Var, Var);

DAF_INSTANTIATE_OPS(float)
DAF_INSTANTIATE_OPS(double)

#undef DAF_INSTANTIATE_OPS

}  // namespace daf::ad
