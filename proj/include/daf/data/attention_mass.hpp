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

#include <cstdint>
#include <optional>
#include <span>

namespace daf::data {

struct AttentionMass {
  double mass = 0.0;           // sum of alpha over target frames
  double mask_fraction = 0.0;  // the uniform-alpha baseline
  // mass / mask_fraction; absent unless both classes occur in the mask.
  std::optional<double> ratio;
};

// `target` is the Speaker code of the frames whose mass is measured.
AttentionMass attention_mass(std::span<const double> alpha, std::span<const std::uint8_t> mask,
                             std::uint8_t target = 1);

}  // namespace daf::data
