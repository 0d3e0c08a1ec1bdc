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

#include "daf/model/checkpoint.hpp"

#include "daf/autodiff/checkpoint.hpp"
#include "daf/common/binary_io.hpp"
#include "daf/common/error.hpp"
#include "json.hpp"

namespace daf::model {

namespace {
constexpr std::string_view kMagic = "DAFM";
}

std::vector<std::uint8_t> encode_checkpoint(const ModelCheckpoint& ckpt) {
  nlohmann::json header;
  header["config"] = nlohmann::json::parse(config_to_json(ckpt.config));
  header["seed"] = ckpt.seed;
  if (ckpt.norm) header["norm"] = nlohmann::json::parse(features::norm_to_json(*ckpt.norm));
  const std::string text = header.dump();
  const auto weights = ad::encode_weights(to_named(ckpt.params));

  ByteWriter w;
  w.bytes(kMagic);
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.bytes(text);
  auto out = w.take();
  out.insert(out.end(), weights.begin(), weights.end());
  return out;
}

ModelCheckpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.bytes(4) != kMagic) throw InputError("not a model checkpoint (bad magic)");
  const std::string text = r.bytes(r.u32());
  ModelCheckpoint ckpt;
  try {
    const auto header = nlohmann::json::parse(text);
    ckpt.config = config_from_json(header.at("config").dump());
    ckpt.seed = header.at("seed").get<std::uint64_t>();
    if (header.contains("norm")) ckpt.norm = features::norm_from_json(header.at("norm").dump());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model checkpoint header: ") + e.what());
  }
  const auto named = ad::decode_weights(bytes.subspan(r.position()));
  ckpt.params = from_named<float>(ckpt.config, named);
  return ckpt;
}

void write_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ckpt) {
  write_file_bytes(path, encode_checkpoint(ckpt));
}

ModelCheckpoint read_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file_bytes(path));
}

}  // namespace daf::model
