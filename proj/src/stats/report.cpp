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

#include "daf/stats/report.hpp"

#include <cmath>
#include <numeric>

#include "daf/common/error.hpp"
#include "json.hpp"

namespace daf::stats {

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void summarize(EvalReport& r) {
  r.mean_rho = mean(r.fold_rho);
  r.sd_rho = sample_sd(r.fold_rho);
}

namespace {
nlohmann::json row_json(const ComparisonRow& c) {
  return {{"model_a", c.model_a},
          {"model_b", c.model_b},
          {"rho_a", c.rho_a},
          {"rho_b", c.rho_b},
          {"z", c.test.z},
          {"p", c.test.p},
          {"significant_0.05", c.test.significant_05()},
          {"significant_0.001", c.test.significant_001()},
          {"dependent_samples", c.test.dependent_samples}};
}
}  // namespace

std::string report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["model"] = r.model;
  j["task"] = r.task;
  j["fold_rho"] = r.fold_rho;
  j["mean_rho"] = r.mean_rho;
  j["sd_rho"] = r.sd_rho;
  j["pooled_rho"] = r.pooled_rho;
  j["pooled_n"] = r.pooled_n;
  j["comparisons"] = nlohmann::json::array();
  for (const auto& c : r.comparisons) j["comparisons"].push_back(row_json(c));
  return j.dump(2);
}

EvalReport report_from_json(const std::string& text) {
  EvalReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.model = j.at("model").get<std::string>();
    r.task = j.at("task").get<std::string>();
    r.fold_rho = j.at("fold_rho").get<std::vector<double>>();
    r.mean_rho = j.at("mean_rho").get<double>();
    r.sd_rho = j.at("sd_rho").get<double>();
    r.pooled_rho = j.at("pooled_rho").get<double>();
    r.pooled_n = j.at("pooled_n").get<std::size_t>();
    for (const auto& c : j.at("comparisons")) {
      ComparisonRow row;
      row.model_a = c.at("model_a").get<std::string>();
      row.model_b = c.at("model_b").get<std::string>();
      row.rho_a = c.at("rho_a").get<double>();
      row.rho_b = c.at("rho_b").get<double>();
      row.test.z = c.at("z").get<double>();
      row.test.p = c.at("p").get<double>();
      row.test.dependent_samples = c.at("dependent_samples").get<bool>();
      r.comparisons.push_back(row);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("eval report: ") + e.what());
  }
  return r;
}

std::vector<ComparisonRow> compare_reports(const std::vector<EvalReport>& reports) {
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (std::size_t j = i + 1; j < reports.size(); ++j) {
      const auto& a = reports[i];
      const auto& b = reports[j];
      if (a.pooled_n != b.pooled_n) throw ContractError("compare: reports cover different instance counts");
      rows.push_back({a.model, b.model, a.pooled_rho, b.pooled_rho,
                      z_test_corr_diff(a.pooled_rho, b.pooled_rho, a.pooled_n, true)});
    }
  }
  return rows;
}

}  // namespace daf::stats
