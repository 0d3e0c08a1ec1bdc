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

#include <cstddef>

namespace daf::stats {

struct ZTestResult {
  double z = 0.0;
  double p = 1.0;
  // The formula assumes independent samples; set when both correlations
  // were measured on the same instances.
  bool dependent_samples = false;
  bool significant_05() const { return p < 0.05; }
  bool significant_001() const { return p < 0.001; }
};

// Fisher z-test for the difference of two correlations measured on N
// samples each: (atanh r1 - atanh r2) / sqrt(2 / (N - 3)).
ZTestResult z_test_corr_diff(double r1, double r2, std::size_t n, bool same_samples = true);

}  // namespace daf::stats
