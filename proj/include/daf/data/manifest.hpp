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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "daf/stats/ratings.hpp"

namespace daf::data {

struct DyadInstance {
  std::string instance_id;
  std::string dyad_id;
  std::filesystem::path feature_path;  // absolute after reading
  std::array<double, 4> labels{};      // CA, PA, CV, PV
};

struct Manifest {
  std::vector<DyadInstance> instances;
  std::array<bool, 4> has_label{};  // which label columns were present

  // Labels of `task` in instance order; InputError when the column is absent.
  std::vector<double> labels(stats::Attribute task) const;
};

// Columns: instance_id, dyad_id, feature_path, then any of CA, PA, CV, PV.
// Relative feature paths resolve against the manifest's directory.
Manifest parse_manifest(std::string_view csv_text, const std::filesystem::path& base_dir);
Manifest read_manifest(const std::filesystem::path& path);
// Feature paths are written relative to the manifest's directory when possible.
void write_manifest(const std::filesystem::path& path, const Manifest& m);

// One byte per frame: 0 speaker A, 1 speaker B, 2 silence.
enum class Speaker : std::uint8_t { kA = 0, kB = 1, kSilence = 2 };
void write_mask(const std::filesystem::path& path, const std::vector<std::uint8_t>& mask);
std::vector<std::uint8_t> read_mask(const std::filesystem::path& path);

}  // namespace daf::data
