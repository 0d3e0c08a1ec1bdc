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

#include "daf/stats/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "daf/common/binary_io.hpp"
#include "daf/common/csv.hpp"
#include "daf/common/error.hpp"
#include "daf/stats/distributions.hpp"

namespace daf::stats {

std::string_view attribute_name(Attribute a) {
  switch (a) {
    case Attribute::kCA: return "CA";
    case Attribute::kPA: return "PA";
    case Attribute::kCV: return "CV";
    case Attribute::kPV: return "PV";
  }
  return "?";
}

Attribute parse_attribute(std::string_view s) {
  for (Attribute a : kAttributes) {
    if (attribute_name(a) == s) return a;
  }
  throw InputError("unknown task '" + std::string(s) + "' (expected CA, PA, CV or PV)");
}

void RatingTable::validate() const {
  if (values.size() != n * k) throw ContractError("rating table: size does not match n x k");
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError("rating table: non-finite rating");
  }
}

std::vector<double> standardize_labels(const RatingTable& t) {
  t.validate();
  if (t.n < 2 || t.k < 1) throw ContractError("standardize_labels: need at least two instances and one rater");
  std::vector<double> out(t.n, 0.0);
  for (std::size_t r = 0; r < t.k; ++r) {
    double mean = 0.0;
    for (std::size_t i = 0; i < t.n; ++i) mean += t.at(i, r);
    mean /= static_cast<double>(t.n);
    double ss = 0.0;
    for (std::size_t i = 0; i < t.n; ++i) ss += (t.at(i, r) - mean) * (t.at(i, r) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(t.n));
    if (sd == 0.0) throw NumericError("standardize_labels: rater " + std::to_string(r) + " gives a constant column");
    for (std::size_t i = 0; i < t.n; ++i) out[i] += (t.at(i, r) - mean) / sd;
  }
  for (double& v : out) v /= static_cast<double>(t.k);
  return out;
}

IccResult icc(const RatingTable& t, IccForm form) {
  t.validate();
  const std::size_t n = t.n, k = t.k;
  if (n < 2 || k < 2) throw ContractError("icc: need at least two instances and two raters");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  const double grand = std::accumulate(t.values.begin(), t.values.end(), 0.0) / (nd * kd);
  std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < k; ++r) {
      row_mean[i] += t.at(i, r);
      col_mean[r] += t.at(i, r);
    }
  }
  for (double& m : row_mean) m /= kd;
  for (double& m : col_mean) m /= nd;
  double ss_rows = 0.0, ss_cols = 0.0, ss_err = 0.0;
  for (double m : row_mean) ss_rows += (m - grand) * (m - grand);
  for (double m : col_mean) ss_cols += (m - grand) * (m - grand);
  ss_rows *= kd;
  ss_cols *= nd;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < k; ++r) {
      const double e = t.at(i, r) - row_mean[i] - col_mean[r] + grand;
      ss_err += e * e;
    }
  }
  const double df1 = nd - 1.0, df2 = (nd - 1.0) * (kd - 1.0);
  IccResult res;
  res.bms = ss_rows / df1;
  res.ems = ss_err / df2;
  if (res.bms == 0.0 && res.ems == 0.0) throw NumericError("icc: no between-target or residual variance");

  auto from_f = [&](double f) {
    if (std::isinf(f)) return 1.0;
    return form == IccForm::kIcc31 ? (f - 1.0) / (f + kd - 1.0) : 1.0 - 1.0 / f;
  };
  if (res.ems == 0.0) {
    res.f = std::numeric_limits<double>::infinity();
    res.estimate = res.ci_low = res.ci_high = 1.0;
    return res;
  }
  res.f = res.bms / res.ems;
  res.estimate = form == IccForm::kIcc31 ? (res.bms - res.ems) / (res.bms + (kd - 1.0) * res.ems)
                                         : (res.bms - res.ems) / res.bms;
  const double f_lower = res.f / f_quantile(0.975, df1, df2);
  const double f_upper = res.f * f_quantile(0.975, df2, df1);
  res.ci_low = from_f(f_lower);
  res.ci_high = from_f(f_upper);
  return res;
}

AnnotationSet parse_annotations(std::string_view csv_text) {
  const CsvTable csv = parse_csv(csv_text);
  const std::size_t c_inst = csv.column("instance_id"), c_dyad = csv.column("dyad_id"),
                    c_rater = csv.column("rater_id");
  std::array<std::size_t, 4> c_attr{};
  for (std::size_t a = 0; a < 4; ++a) c_attr[a] = csv.column(attribute_name(kAttributes[a]));

  std::map<std::string, std::string> dyad_of;
  std::set<std::string> raters;
  std::map<std::pair<std::string, std::string>, std::array<double, 4>> cells;
  for (std::size_t row = 0; row < csv.size(); ++row) {
    const std::string& inst = csv.text(row, c_inst);
    const std::string& dyad = csv.text(row, c_dyad);
    const std::string& rater = csv.text(row, c_rater);
    if (inst.empty() || dyad.empty() || rater.empty()) {
      throw InputError("annotation row " + std::to_string(row + 2) + ": empty identifier");
    }
    auto [it, fresh] = dyad_of.emplace(inst, dyad);
    if (!fresh && it->second != dyad) throw InputError("instance '" + inst + "' appears under two dyads");
    raters.insert(rater);
    std::array<double, 4> v{};
    for (std::size_t a = 0; a < 4; ++a) {
      v[a] = csv.number(row, c_attr[a]);
      if (v[a] < -2.0 || v[a] > 2.0) {
        throw InputError("annotation row " + std::to_string(row + 2) + ": rating outside [-2, 2]");
      }
    }
    if (!cells.emplace(std::pair{inst, rater}, v).second) {
      throw InputError("instance '" + inst + "' rated twice by rater '" + rater + "'");
    }
  }
  if (dyad_of.empty()) throw InputError("annotation file has no rows");

  AnnotationSet out;
  out.rater_ids.assign(raters.begin(), raters.end());
  for (const auto& [inst, dyad] : dyad_of) {
    out.instance_ids.push_back(inst);
    out.dyad_ids.push_back(dyad);
  }
  const std::size_t n = out.instance_ids.size(), k = out.rater_ids.size();
  for (std::size_t a = 0; a < 4; ++a) {
    out.tables[a] = RatingTable{n, k, std::vector<double>(n * k), kAttributes[a]};
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < k; ++r) {
      const auto it = cells.find({out.instance_ids[i], out.rater_ids[r]});
      if (it == cells.end()) {
        throw InputError("instance '" + out.instance_ids[i] + "' is missing rater '" + out.rater_ids[r] + "'");
      }
      for (std::size_t a = 0; a < 4; ++a) out.tables[a].values[i * k + r] = it->second[a];
    }
  }
  return out;
}

AnnotationSet read_annotations(const std::filesystem::path& path) {
  try {
    return parse_annotations(read_text_file(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace daf::stats
