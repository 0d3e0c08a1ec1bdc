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

#include "daf/data/attention_mass.hpp"

#include "daf/common/error.hpp"

namespace daf::data {

AttentionMass attention_mass(std::span<const double> alpha, std::span<const std::uint8_t> mask,
                             std::uint8_t target) {
  if (alpha.size() != mask.size()) {
    throw ContractError("attention_mass: " + std::to_string(alpha.size()) + " weights for " +
                        std::to_string(mask.size()) + " mask frames");
  }
  if (alpha.empty()) throw ContractError("attention_mass: empty input");
  AttentionMass out;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    if (mask[t] == target) {
      out.mass += alpha[t];
      ++hits;
    }
  }
  out.mask_fraction = static_cast<double>(hits) / static_cast<double>(mask.size());
  if (hits > 0 && hits < mask.size()) out.ratio = out.mass / out.mask_fraction;
  return out;
}

}  // namespace daf::data
