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

#include "daf/autodiff/checkpoint.hpp"

#include "daf/common/binary_io.hpp"

namespace daf::ad {
namespace {
constexpr std::string_view kMagic = "DAFW";
}

std::vector<std::uint8_t> encode_weights(std::span<const NamedTensor> tensors) {
  ByteWriter w;
  w.bytes(kMagic);
  w.u32(static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& t : tensors) {
    if (t.name.size() > 0xFFFF) throw ContractError("weights: tensor name too long");
    if (t.shape.size() > 0xFF) throw ContractError("weights: tensor rank too large");
    if (shape_size(t.shape) != t.values.size()) throw ContractError("weights: '" + t.name + "' size mismatch");
    w.u16(static_cast<std::uint16_t>(t.name.size()));
    w.bytes(t.name);
    w.u8(static_cast<std::uint8_t>(t.shape.size()));
    for (std::size_t e : t.shape) w.u32(static_cast<std::uint32_t>(e));
    for (float v : t.values) w.f32(v);
  }
  return w.take();
}

std::vector<NamedTensor> decode_weights(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (bytes.size() < 8 || r.bytes(4) != kMagic) throw InputError("weights: bad magic");
  const std::uint32_t count = r.u32();
  std::vector<NamedTensor> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    t.name = r.bytes(r.u16());
    const std::uint8_t rank = r.u8();
    for (std::uint8_t d = 0; d < rank; ++d) t.shape.push_back(r.u32());
    const std::size_t n = shape_size(t.shape);
    if (r.remaining() < n * 4) throw InputError("weights: truncated payload for '" + t.name + "'");
    t.values.resize(n);
    for (float& v : t.values) v = r.f32();
    out.push_back(std::move(t));
  }
  if (r.remaining() != 0) throw InputError("weights: trailing bytes after last tensor");
  return out;
}

void write_weights(const std::filesystem::path& path, std::span<const NamedTensor> tensors) {
  write_file_bytes(path, encode_weights(tensors));
}

std::vector<NamedTensor> read_weights(const std::filesystem::path& path) {
  return decode_weights(read_file_bytes(path));
}

template <class T>
NamedTensor to_named(const std::string& name, const Tensor<T>& t) {
  NamedTensor nt{name, t.shape(), {}};
  nt.values.reserve(t.size());
  for (T v : t.data()) nt.values.push_back(static_cast<float>(v));
  return nt;
}

template <class T>
Tensor<T> from_named(const NamedTensor& nt) {
  return Tensor<T>(nt.shape, std::vector<T>(nt.values.begin(), nt.values.end()));
}

template NamedTensor to_named<float>(const std::string&, const Tensor<float>&);
template NamedTensor to_named<double>(const std::string&, const Tensor<double>&);
template Tensor<float> from_named<float>(const NamedTensor&);
template Tensor<double> from_named<double>(const NamedTensor&);

}  // namespace daf::ad
