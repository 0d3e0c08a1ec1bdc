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

#include "daf/features/norm.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace daf::features {

NormStats fit_norm(std::span<const FeatureMatrix* const> dataset) {
  if (dataset.empty()) throw ContractError("fit_norm: empty dataset");
  const std::size_t cols = dataset.front()->cols();
  std::size_t frames = 0;
  NormStats stats;
  stats.names = dataset.front()->names();
  stats.mean.assign(cols, 0.0);
  for (const FeatureMatrix* m : dataset) {
    if (m->cols() != cols) throw ContractError("fit_norm: descriptor count differs across matrices");
    frames += m->rows();
    for (std::size_t t = 0; t < m->rows(); ++t) {
      for (std::size_t d = 0; d < cols; ++d) stats.mean[d] += m->at(t, d);
    }
  }
  if (frames < 2) throw ContractError("fit_norm: need at least two frames");
  for (double& v : stats.mean) v /= static_cast<double>(frames);

  std::vector<double> ss(cols, 0.0);
  for (const FeatureMatrix* m : dataset) {
    for (std::size_t t = 0; t < m->rows(); ++t) {
      for (std::size_t d = 0; d < cols; ++d) {
        const double dev = m->at(t, d) - stats.mean[d];
        ss[d] += dev * dev;
      }
    }
  }
  stats.std.resize(cols);
  for (std::size_t d = 0; d < cols; ++d) {
    stats.std[d] = std::max(std::sqrt(ss[d] / static_cast<double>(frames)), kStdFloor);
  }
  return stats;
}

NormStats fit_norm(std::span<const FeatureMatrix> dataset) {
  std::vector<const FeatureMatrix*> ptrs;
  ptrs.reserve(dataset.size());
  for (const FeatureMatrix& m : dataset) ptrs.push_back(&m);
  return fit_norm(std::span<const FeatureMatrix* const>(ptrs));
}

FeatureMatrix apply_norm(const FeatureMatrix& m, const NormStats& stats) {
  if (stats.mean.size() != m.cols() || stats.std.size() != m.cols()) {
    throw ContractError("apply_norm: descriptor count mismatch");
  }
  std::vector<double> out(m.values().begin(), m.values().end());
  for (std::size_t t = 0; t < m.rows(); ++t) {
    for (std::size_t d = 0; d < m.cols(); ++d) {
      double& v = out[t * m.cols() + d];
      v = (v - stats.mean[d]) / stats.std[d];
    }
  }
  return FeatureMatrix(m.rows(), m.cols(), std::move(out), m.names());
}

std::string norm_to_json(const NormStats& stats) {
  nlohmann::json j;
  j["names"] = stats.names;
  j["mean"] = stats.mean;
  j["std"] = stats.std;
  return j.dump(2);
}

NormStats norm_from_json(const std::string& text) {
  NormStats stats;
  try {
    const auto j = nlohmann::json::parse(text);
    stats.mean = j.at("mean").get<std::vector<double>>();
    stats.std = j.at("std").get<std::vector<double>>();
    if (j.contains("names")) stats.names = j.at("names").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("norm stats: ") + e.what());
  }
  if (stats.mean.size() != stats.std.size()) throw InputError("norm stats: mean/std length mismatch");
  for (double s : stats.std) {
    if (!(s > 0.0)) throw InputError("norm stats: std entries must be positive");
  }
  return stats;
}

}  // namespace daf::features
