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

// "DAF1" feature files: magic, u32 L, u32 D, then L*D float32 row-major, all
// little-endian. Descriptor names live in a sidecar "<file>.names", one per
// line.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "daf/features/lld.hpp"

namespace daf::features {

std::vector<std::uint8_t> encode_features(const FeatureMatrix& m);
// Without names, default descriptor names are used when D matches the
// extractor layout, otherwise "lld_<i>".
FeatureMatrix decode_features(std::span<const std::uint8_t> bytes,
                              std::vector<std::string> names = {});

std::filesystem::path names_sidecar(const std::filesystem::path& path);
void write_features(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix read_features(const std::filesystem::path& path);

}  // namespace daf::features
