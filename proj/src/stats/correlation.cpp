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

#include "daf/stats/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "daf/common/error.hpp"

namespace daf::stats {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = r;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("pearson: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw NumericError("pearson: need at least two samples");
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw NumericError("correlation undefined for a constant vector");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("spearman: length mismatch");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

namespace {
template <class F>
Matrix4 matrix(const std::array<std::vector<double>, 4>& cols, F corr) {
  Matrix4 m{};
  for (std::size_t i = 0; i < 4; ++i) {
    m[i][i] = 1.0;
    for (std::size_t j = i + 1; j < 4; ++j) m[i][j] = m[j][i] = corr(cols[i], cols[j]);
  }
  return m;
}
}  // namespace

Matrix4 pearson_matrix(const std::array<std::vector<double>, 4>& columns) {
  for (const auto& c : columns) pearson(c, c);
  return matrix(columns, [](const auto& a, const auto& b) { return pearson(a, b); });
}

Matrix4 spearman_matrix(const std::array<std::vector<double>, 4>& columns) {
  for (const auto& c : columns) pearson(c, c);
  return matrix(columns, [](const auto& a, const auto& b) { return spearman_rho(a, b); });
}

}  // namespace daf::stats
