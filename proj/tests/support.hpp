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

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "daf/autodiff/ops.hpp"
#include "daf/autodiff/tape.hpp"
#include "daf/common/rng.hpp"

namespace daf::testing {

inline ad::Tensor<double> random_tensor(ad::Shape shape, Rng& rng, double scale = 1.0) {
  std::vector<double> v(ad::shape_size(shape));
  for (auto& x : v) x = scale * standard_normal(rng);
  return ad::Tensor<double>(std::move(shape), std::move(v));
}

inline ad::Tensor<float> random_tensor_f(ad::Shape shape, Rng& rng, double scale = 1.0) {
  std::vector<float> v(ad::shape_size(shape));
  for (auto& x : v) x = static_cast<float>(scale * standard_normal(rng));
  return ad::Tensor<float>(std::move(shape), std::move(v));
}

// Builds a scalar from the leaves; called once for the analytic pass and
// twice per perturbed element.
using ScalarFn = std::function<ad::Var(ad::Tape<double>&, const std::vector<ad::Var>&)>;

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

inline constexpr double kFdStep = 1e-5;
// Relative error |a - n| / max(|a|, |n|, floor); the floor keeps
// near-zero gradients from turning rounding noise into large ratios.
inline constexpr double kFdFloor = 1e-3;

// Central differences with step 1e-5 against tape gradients for every
// element of every leaf.
inline GradCheck check_gradients(std::vector<ad::Tensor<double>> leaves, const ScalarFn& fn) {
  std::vector<std::vector<double>> analytic;
  {
    ad::Tape<double> tape;
    std::vector<ad::Var> vars;
    for (auto& l : leaves) vars.push_back(tape.parameter(l));
    for (auto& l : leaves) l.zero_grad();
    tape.backward(fn(tape, vars));
    for (auto& l : leaves) analytic.emplace_back(l.grad().begin(), l.grad().end());
  }
  auto eval = [&] {
    ad::Tape<double> tape;
    std::vector<ad::Var> vars;
    for (auto& l : leaves) vars.push_back(tape.constant_ref(l));
    return tape.value(fn(tape, vars))[0];
  };
  GradCheck res;
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    auto data = leaves[k].data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double orig = data[i];
      data[i] = orig + kFdStep;
      const double up = eval();
      data[i] = orig - kFdStep;
      const double down = eval();
      data[i] = orig;
      const double numeric = (up - down) / (2.0 * kFdStep);
      const double a = analytic[k][i];
      const double denom = std::max({std::fabs(a), std::fabs(numeric), kFdFloor});
      res.max_rel_error = std::max(res.max_rel_error, std::fabs(a - numeric) / denom);
      ++res.checked;
    }
  }
  return res;
}

// Contracts a tensor-valued op to a scalar with fixed random weights.
inline ad::Var project(ad::Tape<double>& tape, ad::Var v, std::uint64_t seed = 99) {
  Rng rng(seed);
  auto w = random_tensor(tape.shape(v), rng);
  return ad::sum(tape, ad::mul(tape, v, tape.constant(std::move(w))));
}

}  // namespace daf::testing
