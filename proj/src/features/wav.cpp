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

#include <algorithm>
#include <cmath>
#include <fstream>

#include "daf/common/binary_io.hpp"
#include "daf/features/audio.hpp"

namespace daf::features {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

[[noreturn]] void fail(WavError::Kind kind, const std::string& what) { throw WavError(kind, what); }

}  // namespace

AudioClip parse_wav(std::span<const std::uint8_t> bytes) {
  using Kind = WavError::Kind;
  if (bytes.size() < 12) fail(Kind::kMalformedHeader, "wav: file too short for RIFF header");
  ByteReader r(bytes);
  if (r.bytes(4) != "RIFF") fail(Kind::kMalformedHeader, "wav: missing RIFF tag");
  r.u32();
  if (r.bytes(4) != "WAVE") fail(Kind::kMalformedHeader, "wav: missing WAVE tag");

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  while (r.remaining() >= 8) {
    const std::string id = r.bytes(4);
    const std::uint32_t size = r.u32();
    if (id == "fmt ") {
      if (size < 16 || r.remaining() < size) fail(Kind::kMalformedHeader, "wav: truncated fmt chunk");
      std::uint16_t format = r.u16();
      channels = r.u16();
      rate = r.u32();
      r.u32();  // byte rate
      r.u16();  // block align
      bits = r.u16();
      std::size_t consumed = 16;
      if (format == kFormatExtensible && size >= 40) {
        r.u16();  // cbSize
        r.u16();  // valid bits
        r.u32();  // channel mask
        format = r.u16();  // first two bytes of the sub-format GUID
        consumed += 10;
      }
      std::size_t skip = size - consumed;
      if ((size & 1u) != 0 && r.remaining() > skip) ++skip;
      r.bytes(skip);
      if (format != kFormatPcm) fail(Kind::kUnsupportedEncoding, "wav: only PCM encoding is supported");
      if (channels != 1) fail(Kind::kUnsupportedEncoding, "wav: only mono audio is supported");
      if (bits != 16) fail(Kind::kUnsupportedEncoding, "wav: only 16-bit samples are supported");
      if (rate == 0) fail(Kind::kMalformedHeader, "wav: zero sample rate");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) fail(Kind::kMalformedHeader, "wav: data chunk before fmt chunk");
      // Streaming writers leave the size field unset; clamp to what is present.
      const std::size_t n_bytes = std::min<std::size_t>(size, r.remaining()) & ~std::size_t{1};
      if (n_bytes == 0) fail(Kind::kEmptyAudio, "empty audio");
      AudioClip clip;
      clip.sample_rate = static_cast<int>(rate);
      clip.samples.resize(n_bytes / 2);
      for (double& s : clip.samples) {
        s = static_cast<double>(static_cast<std::int16_t>(r.u16())) / 32768.0;
      }
      return clip;
    } else {
      if (r.remaining() < size) fail(Kind::kMalformedHeader, "wav: truncated chunk '" + id + "'");
      r.bytes(size + ((size & 1u) && r.remaining() > size ? 1 : 0));
    }
  }
  if (!have_fmt) fail(Kind::kMalformedHeader, "wav: missing fmt chunk");
  fail(Kind::kMalformedHeader, "wav: missing data chunk");
}

AudioClip read_wav(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file_bytes(path);
  } catch (const InputError& e) {
    throw WavError(WavError::Kind::kIo, e.what());
  }
  return parse_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  if (clip.sample_rate <= 0) throw ContractError("wav: sample rate must be positive");
  const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  ByteWriter w;
  w.bytes("RIFF");
  w.u32(36 + data_bytes);
  w.bytes("WAVE");
  w.bytes("fmt ");
  w.u32(16);
  w.u16(kFormatPcm);
  w.u16(1);
  w.u32(static_cast<std::uint32_t>(clip.sample_rate));
  w.u32(static_cast<std::uint32_t>(clip.sample_rate) * 2);
  w.u16(2);
  w.u16(16);
  w.bytes("data");
  w.u32(data_bytes);
  for (double s : clip.samples) {
    const double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    w.u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return w.take();
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
  write_file_bytes(path, encode_wav(clip));
}

}  // namespace daf::features
