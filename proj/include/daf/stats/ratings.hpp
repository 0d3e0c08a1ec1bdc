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
#include <string_view>
#include <vector>

namespace daf::stats {

enum class Attribute { kCA, kPA, kCV, kPV };
inline constexpr std::array<Attribute, 4> kAttributes = {Attribute::kCA, Attribute::kPA, Attribute::kCV,
                                                         Attribute::kPV};
std::string_view attribute_name(Attribute a);
Attribute parse_attribute(std::string_view s);

// n_instances x k_raters, row-major.
struct RatingTable {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> values;
  Attribute attribute = Attribute::kCA;

  double at(std::size_t i, std::size_t r) const { return values[i * k + r]; }
  void validate() const;
};

// z-score each rater column (population std) over that rater's ratings,
// then average the standardized columns per instance.
std::vector<double> standardize_labels(const RatingTable& t);

enum class IccForm { kIcc31, kIcc3k };

struct IccResult {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double bms = 0.0;  // between-targets mean square
  double ems = 0.0;  // residual mean square
  double f = 0.0;    // bms / ems
};

// Two-way mixed, consistency. 95% CI from F quantiles with (n-1) and
// (n-1)(k-1) degrees of freedom.
IccResult icc(const RatingTable& t, IccForm form);

// Annotation CSV: instance_id, dyad_id, rater_id, CA, PA, CV, PV; one row per
// (instance, rater). Every instance must carry the same rater set.
struct AnnotationSet {
  std::vector<std::string> instance_ids;  // sorted
  std::vector<std::string> dyad_ids;
  std::vector<std::string> rater_ids;  // sorted
  std::array<RatingTable, 4> tables;   // CA, PA, CV, PV
};

AnnotationSet parse_annotations(std::string_view csv_text);
AnnotationSet read_annotations(const std::filesystem::path& path);

}  // namespace daf::stats
