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

#include "daf/train/ccc.hpp"

#include <vector>

#include "daf/common/error.hpp"

namespace daf::train {

namespace {

struct Moments {
  double mean_p = 0.0, mean_t = 0.0, var_p = 0.0, var_t = 0.0, cov = 0.0;
  double denom() const { return var_p + var_t + (mean_p - mean_t) * (mean_p - mean_t); }
};

template <class P>
Moments moments(const P& pred, std::span<const double> target) {
  const std::size_t n = target.size();
  if (pred.size() != n) throw ContractError("ccc: length mismatch");
  if (n < 2) throw NumericError("ccc: need at least two samples");
  Moments m;
  for (std::size_t i = 0; i < n; ++i) {
    m.mean_p += pred[i];
    m.mean_t += target[i];
  }
  m.mean_p /= n;
  m.mean_t /= n;
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = pred[i] - m.mean_p, dt = target[i] - m.mean_t;
    m.var_p += dp * dp;
    m.var_t += dt * dt;
    m.cov += dp * dt;
  }
  m.var_p /= n;
  m.var_t /= n;
  m.cov /= n;
  if (m.var_p == 0.0 && m.var_t == 0.0) throw NumericError("undefined CCC: both vectors are constant");
  return m;
}

}  // namespace

double ccc(std::span<const double> pred, std::span<const double> target) {
  const Moments m = moments(pred, target);
  return 2.0 * m.cov / m.denom();
}

template <class T>
ad::Var ccc_loss(ad::Tape<T>& tape, ad::Var pred, std::span<const double> target) {
  const auto& p = tape.value(pred);
  if (p.rank() != 1) throw ContractError("ccc_loss: predictions must be a vector");
  const Moments m = moments(p.data(), target);
  const double d = m.denom();
  const double value = 1.0 - 2.0 * m.cov / d;
  std::vector<double> t(target.begin(), target.end());
  return tape.record(ad::Tensor<T>({1}, {static_cast<T>(value)}), {pred},
                     [pred, m, d, t = std::move(t)](ad::Tape<T>& tp, ad::Var out) {
                       const double g = tp.grad(out)[0];
                       const auto pv = tp.value(pred).data();
                       auto gp = tp.grad(pred);
                       const double n = static_cast<double>(t.size());
                       for (std::size_t i = 0; i < t.size(); ++i) {
                         const double dcov = (t[i] - m.mean_t) / n;
                         const double dden = 2.0 * (pv[i] - m.mean_p) / n + 2.0 * (m.mean_p - m.mean_t) / n;
                         const double dccc = 2.0 * dcov / d - 2.0 * m.cov * dden / (d * d);
                         gp[i] += static_cast<T>(-g * dccc);
                       }
                     });
}

template ad::Var ccc_loss<float>(ad::Tape<float>&, ad::Var, std::span<const double>);
template ad::Var ccc_loss<double>(ad::Tape<double>&, ad::Var, std::span<const double>);

}  // namespace daf::train
