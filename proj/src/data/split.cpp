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

#include "daf/data/split.hpp"

#include <algorithm>
#include <set>

#include "daf/common/binary_io.hpp"
#include "daf/common/error.hpp"
#include "json.hpp"

namespace daf::data {

void SplitPlan::validate() const {
  std::set<std::string> seen;
  for (std::size_t g = 0; g < kGroups; ++g) {
    if (groups[g].empty()) throw InputError("split group " + std::to_string(g) + " is empty");
    for (const auto& d : groups[g]) {
      if (!seen.insert(d).second) throw InputError("split assigns dyad '" + d + "' twice");
    }
  }
}

SplitPlan build_split(std::vector<DyadCount> dyads) {
  if (dyads.size() < kGroups) {
    throw InputError("split needs at least 5 dyads, got " + std::to_string(dyads.size()));
  }
  std::sort(dyads.begin(), dyads.end(), [](const DyadCount& a, const DyadCount& b) {
    if (a.instances != b.instances) return a.instances > b.instances;
    return a.dyad_id < b.dyad_id;
  });
  SplitPlan plan;
  for (std::size_t i = 0; i < dyads.size(); ++i) plan.groups[i % kGroups].push_back(dyads[i].dyad_id);
  plan.validate();
  return plan;
}

std::array<Fold, kGroups> fold_rotation(const SplitPlan& plan) {
  plan.validate();
  std::array<Fold, kGroups> folds;
  for (std::size_t i = 0; i < kGroups; ++i) {
    const std::size_t test = (i + 1) % kGroups;
    folds[i].dev = plan.groups[i];
    folds[i].test = plan.groups[test];
    for (std::size_t g = 0; g < kGroups; ++g) {
      if (g == i || g == test) continue;
      folds[i].train.insert(folds[i].train.end(), plan.groups[g].begin(), plan.groups[g].end());
    }
  }
  return folds;
}

std::string split_to_json(const SplitPlan& plan) {
  nlohmann::json j;
  j["groups"] = nlohmann::json::array();
  for (const auto& g : plan.groups) j["groups"].push_back(g);
  return j.dump(2);
}

SplitPlan split_from_json(const std::string& text) {
  SplitPlan plan;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& groups = j.at("groups");
    if (!groups.is_array() || groups.size() != kGroups) throw InputError("split file must list exactly 5 groups");
    for (std::size_t g = 0; g < kGroups; ++g) plan.groups[g] = groups[g].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("split file: ") + e.what());
  }
  plan.validate();
  return plan;
}

void write_split(const std::filesystem::path& path, const SplitPlan& plan) {
  write_text_file(path, split_to_json(plan));
}

SplitPlan read_split(const std::filesystem::path& path) { return split_from_json(read_text_file(path)); }

}  // namespace daf::data
