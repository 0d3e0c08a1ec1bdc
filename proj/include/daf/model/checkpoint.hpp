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

// Model checkpoints: magic "DAFM", u32 header length, UTF-8 JSON header
// (config, attention kind, dropout placement, dims, seed, normalization),
// then a complete "DAFW" weights block to the end of the file.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "daf/features/norm.hpp"
#include "daf/model/config.hpp"
#include "daf/model/parameters.hpp"

namespace daf::model {

struct ModelCheckpoint {
  ModelConfig config;
  std::uint64_t seed = 0;
  std::optional<features::NormStats> norm;
  ParameterSet<float> params;
};

std::vector<std::uint8_t> encode_checkpoint(const ModelCheckpoint& ckpt);
ModelCheckpoint decode_checkpoint(std::span<const std::uint8_t> bytes);
void write_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ckpt);
ModelCheckpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace daf::model
