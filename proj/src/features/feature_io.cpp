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

#include "daf/features/feature_io.hpp"

#include <sstream>

#include "daf/common/binary_io.hpp"

namespace daf::features {
namespace {
constexpr std::string_view kMagic = "DAF1";
}

std::vector<std::uint8_t> encode_features(const FeatureMatrix& m) {
  ByteWriter w;
  w.bytes(kMagic);
  w.u32(static_cast<std::uint32_t>(m.rows()));
  w.u32(static_cast<std::uint32_t>(m.cols()));
  for (double v : m.values()) w.f32(static_cast<float>(v));
  return w.take();
}

FeatureMatrix decode_features(std::span<const std::uint8_t> bytes, std::vector<std::string> names) {
  ByteReader r(bytes);
  if (bytes.size() < 12 || r.bytes(4) != kMagic) throw InputError("feature file: bad magic");
  const std::uint32_t rows = r.u32();
  const std::uint32_t cols = r.u32();
  if (r.remaining() != static_cast<std::size_t>(rows) * cols * 4) {
    throw InputError("feature file: payload size does not match header");
  }
  std::vector<double> values(static_cast<std::size_t>(rows) * cols);
  for (double& v : values) v = r.f32();
  if (names.empty()) {
    if (cols == descriptor_names().size()) {
      names = descriptor_names();
    } else {
      for (std::uint32_t d = 0; d < cols; ++d) names.push_back("lld_" + std::to_string(d));
    }
  }
  return FeatureMatrix(rows, cols, std::move(values), std::move(names));
}

std::filesystem::path names_sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".names";
  return p;
}

void write_features(const std::filesystem::path& path, const FeatureMatrix& m) {
  write_file_bytes(path, encode_features(m));
  std::string text;
  for (const auto& n : m.names()) text += n + "\n";
  write_text_file(names_sidecar(path), text);
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  std::vector<std::string> names;
  const auto sidecar = names_sidecar(path);
  if (std::filesystem::exists(sidecar)) {
    std::istringstream in(read_text_file(sidecar));
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) names.push_back(line);
    }
  }
  return decode_features(read_file_bytes(path), std::move(names));
}

}  // namespace daf::features
