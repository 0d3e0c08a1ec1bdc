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

#include <cmath>
#include <numeric>

#include "daf/data/synth.hpp"
#include "daf/model/crdnn.hpp"
#include "daf/stats/correlation.hpp"
#include "daf/train/adam.hpp"
#include "daf/train/ccc.hpp"
#include "daf/train/trainer.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace daf;
using namespace daf::train;
using ad::Tensor;

namespace {

std::vector<double> normals(std::size_t n, Rng& rng, double scale = 1.0, double shift = 0.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = shift + scale * standard_normal(rng);
  return v;
}

// Population-moment CCC in long double.
double oracle_ccc(const std::vector<double>& p, const std::vector<double>& t) {
  const std::size_t n = p.size();
  long double mp = 0, mt = 0;
  for (std::size_t i = 0; i < n; ++i) mp += p[i], mt += t[i];
  mp /= n;
  mt /= n;
  long double vp = 0, vt = 0, c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    vp += (p[i] - mp) * (p[i] - mp);
    vt += (t[i] - mt) * (t[i] - mt);
    c += (p[i] - mp) * (t[i] - mt);
  }
  vp /= n;
  vt /= n;
  c /= n;
  return static_cast<double>(2 * c / (vp + vt + (mp - mt) * (mp - mt)));
}

model::ModelConfig tiny_model() {
  model::ModelConfig cfg;
  cfg.conv_channels = 2;
  cfg.gru_hidden = 4;
  cfg.fc_hidden = 8;
  return cfg;
}

struct TinyData {
  std::vector<Tensor<float>> storage;
  Dataset train, dev;
};

TinyData tiny_data(std::uint64_t seed) {
  const auto task = data::energy_task(30, 6, seed);
  TinyData d;
  d.storage.reserve(task.inputs.size());
  for (const auto& m : task.inputs) d.storage.push_back(model::to_input<float>(m));
  for (std::size_t i = 0; i < task.inputs.size(); ++i) {
    Dataset& s = i < 20 ? d.train : d.dev;
    s.inputs.push_back(&d.storage[i]);
    s.labels.push_back(task.labels[i]);
    s.dyad_ids.push_back((i < 20 ? "t" : "d") + std::to_string(i % 4));
  }
  return d;
}

}  // namespace

TEST_CASE("ccc: stated cases") {
  const std::vector<double> t{-1.0, 0.5, 2.0, 3.5, -0.25};
  CHECK(ccc(t, t) == doctest::Approx(1.0).epsilon(1e-15));
  std::vector<double> zm{-2, -1, 0, 1, 2}, neg{2, 1, 0, -1, -2};
  CHECK(ccc(neg, zm) == doctest::Approx(-1.0).epsilon(1e-15));
  // Shift by c: 2 s^2 / (2 s^2 + c^2) with s^2 the population variance.
  const double c = 0.8;
  std::vector<double> shifted = t;
  for (auto& v : shifted) v += c;
  double mean = 0, var = 0;
  for (double v : t) mean += v / 5;
  for (double v : t) var += (v - mean) * (v - mean) / 5;
  CHECK(std::fabs(ccc(shifted, t) - 2 * var / (2 * var + c * c)) < 1e-14);
  std::vector<double> constant(5, 0.3);
  CHECK(ccc(constant, t) == 0.0);
  CHECK_THROWS_AS(ccc(constant, constant), NumericError);
  CHECK_THROWS_AS(ccc(std::vector<double>{1.0}, std::vector<double>{2.0}), NumericError);
}

TEST_CASE("ccc: symmetry, attenuation and affine invariance against a long-double oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 40;
    const auto t = normals(n, rng);
    auto p = normals(n, rng, 0.7, 0.3);
    for (std::size_t i = 0; i < n; ++i) p[i] += 0.5 * t[i];
    const double v = ccc(p, t);
    CHECK(std::fabs(v - oracle_ccc(p, t)) < 1e-12);
    CHECK(v == doctest::Approx(ccc(t, p)).epsilon(1e-14));
    CHECK(std::fabs(v) <= std::fabs(stats::pearson(p, t)) + 1e-12);
    const double a = 0.5 + uniform01(rng) * 3, b = standard_normal(rng);
    auto pa = p, ta = t;
    for (auto& x : pa) x = a * x + b;
    for (auto& x : ta) x = a * x + b;
    CHECK(ccc(pa, ta) == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("ccc_loss: zero at agreement, one for constant predictions, exact gradients") {
  Rng rng(7);
  const auto t = normals(20, rng);
  {
    ad::Tape<double> tape;
    auto p = tape.constant(Tensor<double>({20}, t));
    CHECK(std::fabs(tape.value(ccc_loss(tape, p, t))[0]) < 1e-15);
  }
  {
    ad::Tape<double> tape;
    auto p = tape.constant(Tensor<double>({20}, std::vector<double>(20, 1.5)));
    CHECK(tape.value(ccc_loss(tape, p, t))[0] == 1.0);
  }
  for (int trial = 0; trial < 5; ++trial) {
    auto pred = testing::random_tensor({20}, rng);
    const auto res = testing::check_gradients(
        {pred}, [&](ad::Tape<double>& tape, const std::vector<ad::Var>& v) { return ccc_loss(tape, v[0], t); });
    CHECK(res.max_rel_error < 1e-6);
  }
}

TEST_CASE("adam: zero gradient leaves parameters and still counts the step") {
  Tensor<double> p({3}, {1.0, -2.0, 0.5});
  p.zero_grad();
  Tensor<double>* ps[] = {&p};
  Adam<double> adam({}, ps);
  adam.step(ps);
  CHECK(adam.steps() == 1);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -2.0);
}

TEST_CASE("adam: first step moves each element by lr against the gradient sign") {
  Tensor<double> p({4}, {0.0, 0.0, 1.0, -1.0});
  auto g = p.grad();
  g[0] = 3.0;
  g[1] = -0.05;
  g[2] = 250.0;
  g[3] = -0.2;
  Tensor<double>* ps[] = {&p};
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  Adam<double> adam(cfg, ps);
  adam.step(ps);
  const double expected[] = {-0.01, 0.01, 0.99, -0.99};
  for (int i = 0; i < 4; ++i) CHECK(p[i] == doctest::Approx(expected[i]).epsilon(1e-6));
}

TEST_CASE("adam: quadratic bowl converges monotonically") {
  Tensor<double> p({5}, std::vector<double>(5, 1.0));
  Tensor<double>* ps[] = {&p};
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  Adam<double> adam(cfg, ps);
  double prev = 5.0;
  bool monotone = true;
  for (int step = 0; step < 2000; ++step) {
    auto g = p.grad();
    for (std::size_t i = 0; i < 5; ++i) g[i] = 2 * p[i];
    adam.step(ps);
    double f = 0;
    for (double x : p.data()) f += x * x;
    // Adam overshoots only once |p| is within a step of the minimum.
    if (f > prev && prev > 1e-4) monotone = false;
    prev = f;
  }
  CHECK(monotone);
  for (double x : p.data()) CHECK(std::fabs(x) < 1e-2);
  p.grad();
  Tensor<double> other({2});
  Tensor<double>* wrong[] = {&other};
  CHECK_THROWS_AS(adam.step(wrong), ContractError);
}

TEST_CASE("early stopping: scripted plateau and strict improvement") {
  {
    EarlyStopper s(15);
    std::size_t stopped_at = 0;
    for (std::size_t epoch = 1; epoch <= 200 && !stopped_at; ++epoch) {
      s.update(epoch, 0.42);
      if (s.should_stop()) stopped_at = epoch;
    }
    CHECK(stopped_at == 16);
    CHECK(s.best_epoch() == 1);
  }
  {
    EarlyStopper s(15);
    bool stopped = false;
    for (std::size_t epoch = 1; epoch <= 200; ++epoch) {
      s.update(epoch, 0.001 * epoch);
      stopped = stopped || s.should_stop();
    }
    CHECK_FALSE(stopped);
    CHECK(s.best_epoch() == 200);
  }
  {
    // Improves up to epoch 10, then plateaus: stop at 10 + 15.
    EarlyStopper s(15);
    std::size_t epoch = 1;
    for (; epoch <= 200; ++epoch) {
      s.update(epoch, epoch <= 10 ? 0.1 * epoch : 0.5);
      if (s.should_stop()) break;
    }
    CHECK(epoch == 25);
    CHECK(s.best_epoch() == 10);
  }
}

TEST_CASE("train config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.patience = 200;
  CHECK_THROWS_AS(c.validate(), ContractError);
  c = {};
  c.learning_rate = 0;
  CHECK_THROWS_AS(c.validate(), ContractError);
}

TEST_CASE("make_batches covers every instance once and never mixes lengths") {
  std::vector<Tensor<float>> storage;
  Dataset d;
  for (std::size_t i = 0; i < 47; ++i) storage.emplace_back(ad::Shape{3 + i % 3, 2});
  for (const auto& t : storage) d.inputs.push_back(&t);
  d.labels.assign(47, 0.0);
  Rng rng(3);
  const auto batches = make_batches(d, 5, rng);
  std::vector<int> seen(47, 0);
  for (const auto& b : batches) {
    CHECK(b.size() >= 2);
    CHECK(b.size() <= 6);
    for (std::size_t i : b) {
      ++seen[i];
      CHECK(d.inputs[i]->dim(0) == d.inputs[b[0]]->dim(0));
    }
  }
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("train_task: input validation") {
  auto d = tiny_data(1);
  const auto cfg = tiny_model();
  TrainConfig tc;
  tc.max_epochs = 3;
  tc.patience = 2;
  Dataset empty;
  CHECK_THROWS_AS(train_task(cfg, empty, d.dev, tc), ContractError);
  auto overlap = d.dev;
  overlap.dyad_ids[0] = d.train.dyad_ids[0];
  CHECK_THROWS_AS(train_task(cfg, d.train, overlap, tc), ContractError);
  auto flat = d.dev;
  std::fill(flat.labels.begin(), flat.labels.end(), 1.0);
  CHECK_THROWS_AS(train_task(cfg, d.train, flat, tc), NumericError);
}

TEST_CASE("train_task: bitwise reproducible and keeps the best dev epoch") {
  auto d = tiny_data(2);
  const auto cfg = tiny_model();
  TrainConfig tc;
  tc.learning_rate = 1e-2;
  tc.max_epochs = 12;
  tc.patience = 4;
  tc.seed = 5;
  const auto a = train_task(cfg, d.train, d.dev, tc);
  const auto b = train_task(cfg, d.train, d.dev, tc);
  CHECK(ad::encode_weights(model::to_named(a.params)) == ad::encode_weights(model::to_named(b.params)));
  REQUIRE(a.report.epochs.size() == b.report.epochs.size());
  double best = -2;
  for (std::size_t i = 0; i < a.report.epochs.size(); ++i) {
    CHECK(a.report.epochs[i].train_loss == b.report.epochs[i].train_loss);
    best = std::max(best, a.report.epochs[i].dev_rho);
  }
  CHECK(a.report.best_dev_rho == best);
  CHECK(a.report.epochs[a.report.best_epoch - 1].dev_rho == best);
  if (a.report.stopped_early) CHECK(a.report.epochs_run() == a.report.best_epoch + tc.patience);
  // Returned parameters reproduce the best epoch's dev score.
  const auto pred = model::predict<float>(cfg, a.params, d.dev.inputs);
  CHECK(rho_or_zero({pred.begin(), pred.end()}, d.dev.labels) == best);
}
