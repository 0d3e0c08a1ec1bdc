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

#include "daf/stats/ztest.hpp"

#include <cmath>

#include "daf/common/error.hpp"
#include "daf/stats/distributions.hpp"

namespace daf::stats {

ZTestResult z_test_corr_diff(double r1, double r2, std::size_t n, bool same_samples) {
  if (n <= 3) throw ContractError("z-test: need N > 3");
  if (!(std::fabs(r1) < 1.0 && std::fabs(r2) < 1.0)) {
    throw NumericError("z-test: Fisher transform undefined for |rho| >= 1");
  }
  ZTestResult res;
  res.z = (std::atanh(r1) - std::atanh(r2)) / std::sqrt(2.0 / (static_cast<double>(n) - 3.0));
  res.p = normal_two_sided_p(res.z);
  res.dependent_samples = same_samples;
  return res;
}

}  // namespace daf::stats
