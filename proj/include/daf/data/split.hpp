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
#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace daf::data {

inline constexpr std::size_t kGroups = 5;

struct SplitPlan {
  std::array<std::vector<std::string>, kGroups> groups;

  // Throws unless groups are non-empty and pairwise disjoint.
  void validate() const;
};

struct DyadCount {
  std::string dyad_id;
  std::size_t instances = 0;
};

// Greedy round-robin: dyads sorted by instance count (descending, ties by
// dyad_id) are dealt to groups 0..4 in turn.
SplitPlan build_split(std::vector<DyadCount> dyads);

struct Fold {
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> test;
};

// Fold i: dev = group i, test = group (i + 1) mod 5, train = the rest.
std::array<Fold, kGroups> fold_rotation(const SplitPlan& plan);

std::string split_to_json(const SplitPlan& plan);
SplitPlan split_from_json(const std::string& text);
void write_split(const std::filesystem::path& path, const SplitPlan& plan);
SplitPlan read_split(const std::filesystem::path& path);

}  // namespace daf::data
