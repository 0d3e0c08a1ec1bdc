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

// Differentiable operations. Each takes the tape it records on and returns
// the handle of its result. Shapes are checked eagerly (ContractError).

#include <cstddef>

#include "daf/autodiff/tape.hpp"
#include "daf/common/rng.hpp"

namespace daf::ad {

// Elementwise, same shape.
template <class T> Var add(Tape<T>& tape, Var a, Var b);
template <class T> Var mul(Tape<T>& tape, Var a, Var b);
template <class T> Var scale(Tape<T>& tape, Var a, T factor);
template <class T> Var relu(Tape<T>& tape, Var a);

// Sum of all elements, shape {1}.
template <class T> Var sum(Tape<T>& tape, Var a);
// Same data, new shape of equal size.
template <class T> Var reshape(Tape<T>& tape, Var a, Shape shape);
// Concatenation along the last axis; leading axes must agree.
template <class T> Var concat_last(Tape<T>& tape, Var a, Var b);

// [m x k] * [k x n]
template <class T> Var matmul(Tape<T>& tape, Var a, Var b);
// x[n x k] * w[k x m] + b[m]
template <class T> Var linear(Tape<T>& tape, Var x, Var w, Var b);

// Valid convolution along the feature axis of each frame.
// x: [N x D], kernels: [C x 1 x W], bias: [C] -> [N x C x (D - W + 1)]
template <class T> Var conv1d_feature_axis(Tape<T>& tape, Var x, Var kernels, Var bias);

// Max over windows of `width` along the last axis, moving by `stride`.
// [N x C x D] -> [N x C x (floor((D - width) / stride) + 1)]. Ties go to the
// lowest index, which also receives the gradient.
template <class T>
Var maxpool_feature_axis(Tape<T>& tape, Var x, std::size_t width = 3, std::size_t stride = 2);

inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.9;

// Per-column normalization of x[N x K]. Train mode uses batch statistics
// (population variance) and moves the running statistics toward them with
// momentum 0.9; infer mode uses the running statistics.
template <class T>
Var batchnorm(Tape<T>& tape, Var x, Var gamma, Var beta, Tensor<T>& running_mean,
              Tensor<T>& running_var, Mode mode);
// As batchnorm, but never writes the running statistics.
template <class T>
Var batchnorm_frozen(Tape<T>& tape, Var x, Var gamma, Var beta, const Tensor<T>& running_mean,
                     const Tensor<T>& running_var, Mode mode);

// Inverted dropout: in train mode each element is zeroed with probability p
// and survivors are scaled by 1/(1-p). Identity in infer mode or when p = 0.
template <class T> Var dropout(Tape<T>& tape, Var x, double p, Mode mode, Rng& rng);

// Softmax along the last axis, max-subtracted.
template <class T> Var softmax(Tape<T>& tape, Var v);

// h: [B x L x H] -> [B x H], mean over L.
template <class T> Var mean_time(Tape<T>& tape, Var h);
// src: [B x L x K], w: [K] -> logits [B x L] with logits[b, t] = w . src[b, t].
template <class T> Var attention_logits(Tape<T>& tape, Var src, Var w);
// alpha: [B x L], h: [B x L x H] -> [B x H], sum over t of alpha[b, t] h[b, t].
template <class T> Var weighted_time_sum(Tape<T>& tape, Var alpha, Var h);

// GRU weights for one layer and direction. Gate blocks are ordered
// (update z, reset r, candidate).
struct GruVars {
  Var w_input;         // [K x 3H]
  Var w_hidden_gates;  // [H x 2H], recurrent weights of z and r
  Var w_hidden_cand;   // [H x H], recurrent weights of the candidate
  Var bias;            // [3H]
};

// One step:
//   z = sigmoid(x Wz + h Uz + bz), r = sigmoid(x Wr + h Ur + br)
//   c = tanh(x Wc + (r * h) Uc + bc), h' = (1 - z) * h + z * c
// x: [K], h_prev: [H] -> [H]
template <class T> Var gru_cell(Tape<T>& tape, Var x, Var h_prev, const GruVars& w);

// Runs the cell over x[B x L x K] from a zero state, forward in time or
// reversed, and returns every hidden state as [B x L x H] (outputs stay at
// their original time index when reversed).
template <class T> Var gru_sequence(Tape<T>& tape, Var x, const GruVars& w, bool reverse);

}  // namespace daf::ad
