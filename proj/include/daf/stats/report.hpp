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

#include <cstddef>
#include <string>
#include <vector>

#include "daf/stats/ztest.hpp"

namespace daf::stats {

struct ComparisonRow {
  std::string model_a;
  std::string model_b;
  double rho_a = 0.0;
  double rho_b = 0.0;
  ZTestResult test;
};

struct EvalReport {
  std::string model;
  std::string task;
  std::vector<double> fold_rho;
  double mean_rho = 0.0;
  double sd_rho = 0.0;  // sample SD over folds
  double pooled_rho = 0.0;
  std::size_t pooled_n = 0;
  std::vector<ComparisonRow> comparisons;
};

double mean(const std::vector<double>& v);
// n - 1 denominator; 0 for fewer than two values.
double sample_sd(const std::vector<double>& v);

// Fills mean_rho and sd_rho from fold_rho.
void summarize(EvalReport& r);
std::string report_to_json(const EvalReport& r);
EvalReport report_from_json(const std::string& text);

// Pairwise z-tests between reports on pooled test predictions.
std::vector<ComparisonRow> compare_reports(const std::vector<EvalReport>& reports);

}  // namespace daf::stats
