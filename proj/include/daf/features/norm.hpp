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
#include <string>
#include <vector>

#include "daf/features/lld.hpp"

namespace daf::features {

inline constexpr double kStdFloor = 1e-8;

struct NormStats {
  std::vector<double> mean;
  std::vector<double> std;
  std::vector<std::string> names;
};

// Per-descriptor mean and population std over every frame of every matrix.
// Two-pass; std is floored at kStdFloor.
NormStats fit_norm(std::span<const FeatureMatrix> dataset);
NormStats fit_norm(std::span<const FeatureMatrix* const> dataset);
FeatureMatrix apply_norm(const FeatureMatrix& m, const NormStats& stats);

std::string norm_to_json(const NormStats& stats);
NormStats norm_from_json(const std::string& text);

}  // namespace daf::features
