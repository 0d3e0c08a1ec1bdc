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

// "DAFW" weight files: magic, u32 tensor count, then per tensor u16 name
// length, UTF-8 name, u8 rank, rank x u32 extents, float32 payload. All
// integers and floats little-endian.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "daf/autodiff/tensor.hpp"

namespace daf::ad {

struct NamedTensor {
  std::string name;
  Shape shape;
  std::vector<float> values;
};

std::vector<std::uint8_t> encode_weights(std::span<const NamedTensor> tensors);
std::vector<NamedTensor> decode_weights(std::span<const std::uint8_t> bytes);

void write_weights(const std::filesystem::path& path, std::span<const NamedTensor> tensors);
std::vector<NamedTensor> read_weights(const std::filesystem::path& path);

template <class T>
NamedTensor to_named(const std::string& name, const Tensor<T>& t);
template <class T>
Tensor<T> from_named(const NamedTensor& nt);

}  // namespace daf::ad
