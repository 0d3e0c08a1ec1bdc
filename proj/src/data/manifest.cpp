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

#include "daf/data/manifest.hpp"

#include <cstdio>
#include <set>

#include "daf/common/binary_io.hpp"
#include "daf/common/csv.hpp"
#include "daf/common/error.hpp"

namespace daf::data {

namespace fs = std::filesystem;

std::vector<double> Manifest::labels(stats::Attribute task) const {
  const auto a = static_cast<std::size_t>(task);
  if (!has_label[a]) {
    throw InputError("manifest has no label column '" + std::string(stats::attribute_name(task)) + "'");
  }
  std::vector<double> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(inst.labels[a]);
  return out;
}

Manifest parse_manifest(std::string_view csv_text, const fs::path& base_dir) {
  const CsvTable csv = parse_csv(csv_text);
  const std::size_t c_inst = csv.column("instance_id"), c_dyad = csv.column("dyad_id"),
                    c_path = csv.column("feature_path");
  Manifest m;
  std::array<std::size_t, 4> c_label{};
  for (std::size_t a = 0; a < 4; ++a) {
    const auto name = stats::attribute_name(stats::kAttributes[a]);
    m.has_label[a] = csv.has_column(name);
    if (m.has_label[a]) c_label[a] = csv.column(name);
  }
  std::set<std::string> seen;
  for (std::size_t row = 0; row < csv.size(); ++row) {
    DyadInstance inst;
    inst.instance_id = csv.text(row, c_inst);
    inst.dyad_id = csv.text(row, c_dyad);
    if (inst.instance_id.empty() || inst.dyad_id.empty()) {
      throw InputError("manifest row " + std::to_string(row + 2) + ": empty identifier");
    }
    if (!seen.insert(inst.instance_id).second) {
      throw InputError("manifest repeats instance_id '" + inst.instance_id + "'");
    }
    fs::path p = csv.text(row, c_path);
    if (p.empty()) throw InputError("manifest row " + std::to_string(row + 2) + ": empty feature_path");
    inst.feature_path = (p.is_relative() ? base_dir / p : p).lexically_normal();
    for (std::size_t a = 0; a < 4; ++a) {
      if (m.has_label[a]) inst.labels[a] = csv.number(row, c_label[a]);
    }
    m.instances.push_back(std::move(inst));
  }
  if (m.instances.empty()) throw InputError("manifest lists no instances");
  return m;
}

Manifest read_manifest(const fs::path& path) {
  try {
    return parse_manifest(read_text_file(path), fs::absolute(path).parent_path());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_manifest(const fs::path& path, const Manifest& m) {
  const fs::path base = fs::absolute(path).parent_path();
  std::vector<std::string> header{"instance_id", "dyad_id", "feature_path"};
  for (std::size_t a = 0; a < 4; ++a) {
    if (m.has_label[a]) header.emplace_back(stats::attribute_name(stats::kAttributes[a]));
  }
  std::string out = csv_row(header);
  char buf[64];
  for (const auto& inst : m.instances) {
    fs::path p = fs::absolute(inst.feature_path).lexically_normal();
    const fs::path rel = p.lexically_relative(base);
    std::vector<std::string> row{inst.instance_id, inst.dyad_id, rel.empty() ? p.string() : rel.string()};
    for (std::size_t a = 0; a < 4; ++a) {
      if (!m.has_label[a]) continue;
      std::snprintf(buf, sizeof buf, "%.17g", inst.labels[a]);
      row.emplace_back(buf);
    }
    out += csv_row(row);
  }
  write_text_file(path, out);
}

void write_mask(const fs::path& path, const std::vector<std::uint8_t>& mask) {
  for (auto v : mask) {
    if (v > 2) throw ContractError("speaker mask code out of range");
  }
  write_file_bytes(path, mask);
}

std::vector<std::uint8_t> read_mask(const fs::path& path) {
  auto bytes = read_file_bytes(path);
  for (auto v : bytes) {
    if (v > 2) throw InputError(path.string() + ": speaker mask code out of range");
  }
  return bytes;
}

}  // namespace daf::data
