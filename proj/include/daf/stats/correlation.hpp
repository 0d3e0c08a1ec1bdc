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

#include <array>
#include <span>
#include <vector>

namespace daf::stats {

// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v);

// Population-moment Pearson correlation. Throws NumericError when N < 2 or
// either vector is constant.
double pearson(std::span<const double> a, std::span<const double> b);
// Pearson correlation of average ranks.
double spearman_rho(std::span<const double> a, std::span<const double> b);

using Matrix4 = std::array<std::array<double, 4>, 4>;
// Columns in CA, PA, CV, PV order; symmetric with unit diagonal.
Matrix4 pearson_matrix(const std::array<std::vector<double>, 4>& columns);
Matrix4 spearman_matrix(const std::array<std::vector<double>, 4>& columns);

}  // namespace daf::stats
