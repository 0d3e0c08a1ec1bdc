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

#include <span>

#include "daf/autodiff/tape.hpp"

namespace daf::train {

// Concordance correlation coefficient with population moments:
//   2 cov(p, t) / (var p + var t + (mean p - mean t)^2)
// Throws NumericError when N < 2 or both vectors are constant.
double ccc(std::span<const double> pred, std::span<const double> target);

// 1 - ccc(pred, target) as a tape op; pred: [N], differentiable.
template <class T>
ad::Var ccc_loss(ad::Tape<T>& tape, ad::Var pred, std::span<const double> target);

}  // namespace daf::train
