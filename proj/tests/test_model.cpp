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

#include "daf/common/binary_io.hpp"
#include "daf/kernels/kernels.hpp"
#include "daf/model/checkpoint.hpp"
#include "daf/model/crdnn.hpp"
#include "doctest.h"
#include "model_support.hpp"

using namespace daf;
using namespace daf::model;
using ad::Tensor;
using testing::random_tensor;
using testing::random_instance;
using testing::randomize;
using testing::small_config;
using testing::network_grad_check;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Straight-line infer-mode forward for one instance.
struct Reference {
  double yhat;
  std::vector<double> alpha;
};

Reference reference_forward(const ModelConfig& cfg, const ParameterSet<double>& p, const features::FeatureMatrix& x) {
  const std::size_t len = x.rows(), dprime = cfg.conv_out_dim(), dpool = cfg.pooled_dim(), c = cfg.conv_channels;
  const std::size_t fdim = cfg.cnn_feature_dim(), h = cfg.gru_hidden;
  std::vector<std::vector<double>> f(len, std::vector<double>(fdim));
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      std::vector<double> conv(dprime);
      for (std::size_t j = 0; j < dprime; ++j) {
        double acc = p.conv_bias[ch];
        for (std::size_t k = 0; k < cfg.conv_width; ++k) acc += p.conv_kernels[ch * cfg.conv_width + k] * x.at(t, j + k);
        conv[j] = acc;
      }
      for (std::size_t i = 0; i < dpool; ++i) {
        double m = conv[i * cfg.pool_stride];
        for (std::size_t k = 1; k < cfg.pool_width; ++k) m = std::max(m, conv[i * cfg.pool_stride + k]);
        const std::size_t idx = ch * dpool + i;
        const double r = std::max(m, 0.0);
        f[t][idx] = (r - p.bn_running_mean[idx]) / std::sqrt(p.bn_running_var[idx] + 1e-5) * p.bn_gamma[idx] +
                    p.bn_beta[idx];
      }
    }
  }
  std::vector<std::vector<double>> in = f;
  for (std::size_t layer = 0; layer < cfg.gru_layers; ++layer) {
    const std::size_t k = in[0].size();
    std::vector<std::vector<double>> dir_out[2];
    for (std::size_t dir = 0; dir < 2; ++dir) {
      const auto& g = p.gru[layer][dir];
      dir_out[dir].assign(len, std::vector<double>(h));
      std::vector<double> state(h, 0.0);
      for (std::size_t step = 0; step < len; ++step) {
        const std::size_t t = dir == 0 ? step : len - 1 - step;
        std::vector<double> z(h), r(h), next(h);
        for (std::size_t j = 0; j < h; ++j) {
          double az = g.bias[j], ar = g.bias[h + j];
          for (std::size_t q = 0; q < k; ++q) {
            az += in[t][q] * g.w_input[q * 3 * h + j];
            ar += in[t][q] * g.w_input[q * 3 * h + h + j];
          }
          for (std::size_t q = 0; q < h; ++q) {
            az += state[q] * g.w_hidden_gates[q * 2 * h + j];
            ar += state[q] * g.w_hidden_gates[q * 2 * h + h + j];
          }
          z[j] = sigmoid(az);
          r[j] = sigmoid(ar);
        }
        for (std::size_t j = 0; j < h; ++j) {
          double ac = g.bias[2 * h + j];
          for (std::size_t q = 0; q < k; ++q) ac += in[t][q] * g.w_input[q * 3 * h + 2 * h + j];
          for (std::size_t q = 0; q < h; ++q) ac += r[q] * state[q] * g.w_hidden_cand[q * h + j];
          next[j] = (1 - z[j]) * state[j] + z[j] * std::tanh(ac);
        }
        state = next;
        dir_out[dir][t] = state;
      }
    }
    std::vector<std::vector<double>> out(len);
    for (std::size_t t = 0; t < len; ++t) {
      if (cfg.direction_merge == DirectionMerge::kSum) {
        for (std::size_t j = 0; j < h; ++j) out[t].push_back(dir_out[0][t][j] + dir_out[1][t][j]);
      } else {
        out[t] = dir_out[0][t];
        out[t].insert(out[t].end(), dir_out[1][t].begin(), dir_out[1][t].end());
      }
    }
    in = out;
  }
  const std::size_t hp = in[0].size();
  Reference ref;
  std::vector<double> z(hp, 0.0);
  if (cfg.attention == AttentionKind::kMeanPool) {
    for (std::size_t t = 0; t < len; ++t) {
      for (std::size_t j = 0; j < hp; ++j) z[j] += in[t][j] / len;
    }
  } else {
    const auto& src = cfg.attention == AttentionKind::kAttRnn ? in : f;
    std::vector<double> logit(len);
    for (std::size_t t = 0; t < len; ++t) {
      logit[t] = 0;
      for (std::size_t q = 0; q < src[t].size(); ++q) logit[t] += p.attention_w[q] * src[t][q];
    }
    const double mx = *std::max_element(logit.begin(), logit.end());
    double s = 0;
    for (auto& l : logit) s += (l = std::exp(l - mx));
    for (auto& l : logit) l /= s;
    ref.alpha = logit;
    for (std::size_t t = 0; t < len; ++t) {
      for (std::size_t j = 0; j < hp; ++j) z[j] += logit[t] * in[t][j];
    }
  }
  double y = p.fc2_b[0];
  for (std::size_t u = 0; u < cfg.fc_hidden; ++u) {
    double a = p.fc1_b[u];
    for (std::size_t j = 0; j < hp; ++j) a += z[j] * p.fc1_w[j * cfg.fc_hidden + u];
    y += std::max(a, 0.0) * p.fc2_w[u];
  }
  ref.yhat = y;
  return ref;
}

}  // namespace

TEST_CASE("config labels and parsing") {
  CHECK(model_label(AttentionKind::kAttRnn, DropoutPlacement::kDropCr) == "ATT(R)+DROP(CR)");
  CHECK(model_label(AttentionKind::kMeanPool, DropoutPlacement::kDropAll) == "ATT(NO)+DROP(ALL)");
  CHECK(parse_attention("cnn") == AttentionKind::kAttCnn);
  CHECK_THROWS_AS(parse_attention("xyz"), InputError);
  ModelConfig cfg;
  CHECK(cfg.rnn_output_dim() == 128);
  cfg.direction_merge = DirectionMerge::kConcat;
  CHECK(cfg.rnn_output_dim() == 256);
  cfg.input_dim = 5;
  CHECK_THROWS_AS(cfg.validate(), ContractError);
  const auto back = config_from_json(config_to_json(small_config(AttentionKind::kAttCnn, DirectionMerge::kConcat)));
  CHECK(back.attention == AttentionKind::kAttCnn);
  CHECK(back.direction_merge == DirectionMerge::kConcat);
  CHECK(back.input_dim == 12);
  CHECK(back.attention_dim() == back.cnn_feature_dim());
}

TEST_CASE("init_params: determinism, zero attention, Glorot bounds") {
  ModelConfig cfg = small_config(AttentionKind::kAttRnn);
  cfg.gru_hidden = 8;
  cfg.fc_hidden = 8;
  Rng r1(42), r2(42);
  auto a = init_params<double>(cfg, r1);
  auto b = init_params<double>(cfg, r2);
  auto la = a.all(), lb = b.all();
  REQUIRE(la.size() == lb.size());
  for (std::size_t i = 0; i < la.size(); ++i) {
    CHECK(la[i].first == lb[i].first);
    CHECK(std::equal(la[i].second->data().begin(), la[i].second->data().end(), lb[i].second->data().begin()));
  }
  for (double w : a.attention_w.data()) CHECK(w == 0.0);
  CHECK(a.attention_w.size() == cfg.gru_hidden);
  const double bound = glorot_bound(8, 8);
  CHECK(bound == doctest::Approx(std::sqrt(6.0 / 16.0)));
  double max_abs = 0;
  for (double w : a.fc1_w.data()) {
    CHECK(std::fabs(w) <= bound);
    max_abs = std::max(max_abs, std::fabs(w));
  }
  CHECK(max_abs > 0.5 * bound);
  const double rec = 1.0 / std::sqrt(8.0);
  for (double w : a.gru[0][0].w_hidden_gates.data()) CHECK(std::fabs(w) <= rec);
  for (double v : a.conv_bias.data()) CHECK(v == 0.0);
  for (double v : a.bn_gamma.data()) CHECK(v == 1.0);
  for (double v : a.bn_beta.data()) CHECK(v == 0.0);
  CHECK(init_params<double>(small_config(AttentionKind::kMeanPool), r1).attention_w.size() == 0);
}

TEST_CASE("pool_mean: constant rows, symmetric rows, equivalence with uniform weights") {
  Tensor<double> c({3, 2}, {1.5, -2, 1.5, -2, 1.5, -2});
  CHECK(pool_mean(c) == std::vector<double>{1.5, -2});
  Tensor<double> sym({2, 3}, {1, -4, 0.5, -1, 4, -0.5});
  for (double v : pool_mean(sym)) CHECK(v == 0.0);
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t len = 1 + trial, hd = 5;
    auto h = random_tensor({len, hd}, rng);
    auto src = random_tensor({len, 4}, rng);
    Tensor<double> w({4});
    const auto mean = pool_mean(h);
    const auto wp = pool_weighted(h, src, w);
    for (std::size_t j = 0; j < hd; ++j) CHECK(std::fabs(mean[j] - wp.z[j]) <= 1e-12);
    for (double a : wp.alpha) CHECK(a == 1.0 / len);
  }
  CHECK_THROWS_AS(pool_mean(Tensor<double>({0, 3})), ContractError);
}

TEST_CASE("pool_weighted: saturation and shape errors") {
  Rng rng(4);
  auto h = random_tensor({5, 3}, rng);
  Tensor<double> src({5, 1}, {0, 0, 50, 0, 0});
  Tensor<double> w({1}, {1.0});
  const auto wp = pool_weighted(h, src, w);
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::fabs(wp.z[j] - h[2 * 3 + j]) < 1e-8);
  CHECK_THROWS_AS(pool_weighted(h, src, Tensor<double>({2})), ContractError);
  CHECK_THROWS_AS(pool_weighted(h, Tensor<double>({4, 1}), w), ContractError);
}

TEST_CASE("pool_weighted: gradient of a downstream scalar w.r.t. w") {
  Rng rng(5);
  auto h = random_tensor({6, 4}, rng);
  auto src = random_tensor({6, 3}, rng);
  auto w = random_tensor({3}, rng);
  const auto res = testing::check_gradients({w}, [&](ad::Tape<double>& tape, const std::vector<ad::Var>& v) {
    auto hv = ad::reshape(tape, tape.constant_ref(h), {1, 6, 4});
    auto sv = ad::reshape(tape, tape.constant_ref(src), {1, 6, 3});
    auto alpha = ad::softmax(tape, ad::attention_logits(tape, sv, v[0]));
    return testing::project(tape, ad::weighted_time_sum(tape, alpha, hv));
  });
  CHECK(res.max_rel_error < 1e-5);
}

TEST_CASE("forward matches the straight-line reference within 1e-10") {
  for (auto att : {AttentionKind::kMeanPool, AttentionKind::kAttRnn, AttentionKind::kAttCnn}) {
    for (auto merge : {DirectionMerge::kSum, DirectionMerge::kConcat}) {
      const auto cfg = small_config(att, merge);
      Rng rng(17);
      auto p = init_params<double>(cfg, rng);
      randomize(p, rng);
      const auto x = random_instance(10, cfg.input_dim, rng);
      Rng unused(0);
      const auto pred = forward(cfg, p, x, ad::Mode::kInfer, unused);
      const auto ref = reference_forward(cfg, p, x);
      CHECK(std::fabs(pred.yhat - ref.yhat) < 1e-10);
      if (att == AttentionKind::kMeanPool) {
        CHECK_FALSE(pred.alpha.has_value());
      } else {
        REQUIRE(pred.alpha.has_value());
        for (std::size_t t = 0; t < 10; ++t) CHECK(std::fabs((*pred.alpha)[t] - ref.alpha[t]) < 1e-12);
      }
      CHECK(pred.f.dim(0) == 10);
      CHECK(pred.f.dim(1) == cfg.cnn_feature_dim());
      CHECK(pred.h.dim(1) == cfg.rnn_output_dim());
    }
  }
}

TEST_CASE("weighted heads: alpha is [1] for one frame and always sums to 1") {
  Rng rng(23);
  for (auto att : {AttentionKind::kAttRnn, AttentionKind::kAttCnn}) {
    const auto cfg = small_config(att);
    auto p = init_params<double>(cfg, rng);
    randomize(p, rng, 1.0);
    Rng unused(0);
    const auto one = forward(cfg, p, random_instance(1, cfg.input_dim, rng), ad::Mode::kInfer, unused);
    REQUIRE(one.alpha->size() == 1);
    CHECK((*one.alpha)[0] == 1.0);
    for (std::size_t len : {2u, 7u, 31u}) {
      Rng drop(len);
      const auto pr = forward(cfg, p, random_instance(len, cfg.input_dim, rng), ad::Mode::kTrain, drop);
      double s = 0;
      for (double a : *pr.alpha) {
        CHECK(a >= 0.0);
        s += a;
      }
      CHECK(std::fabs(s - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("zero attention vector reproduces mean pooling exactly") {
  Rng rng(29);
  const auto base = small_config(AttentionKind::kMeanPool);
  auto p = init_params<double>(base, rng);
  randomize(p, rng);
  for (auto att : {AttentionKind::kAttRnn, AttentionKind::kAttCnn}) {
    auto cfg = base;
    cfg.attention = att;
    auto pa = p;
    pa.attention_w = Tensor<double>({cfg.attention_dim()});
    for (int i = 0; i < 5; ++i) {
      const auto x = random_instance(3 + i, base.input_dim, rng);
      Rng u1(0), u2(0);
      CHECK(forward(base, p, x, ad::Mode::kInfer, u1).yhat == forward(cfg, pa, x, ad::Mode::kInfer, u2).yhat);
    }
  }
}

TEST_CASE("infer mode is deterministic and dropout-free; train mode is seeded") {
  Rng rng(31);
  auto cfg = small_config(AttentionKind::kAttRnn);
  cfg.dropout = DropoutPlacement::kDropAll;
  auto p = init_params<double>(cfg, rng);
  randomize(p, rng);
  const auto x = random_instance(6, cfg.input_dim, rng);
  Rng a(1), b(2);
  CHECK(forward(cfg, p, x, ad::Mode::kInfer, a).yhat == forward(cfg, p, x, ad::Mode::kInfer, b).yhat);
  Rng c(5), d(5);
  CHECK(forward(cfg, p, x, ad::Mode::kTrain, c).yhat == forward(cfg, p, x, ad::Mode::kTrain, d).yhat);
  CHECK_THROWS_AS(forward(cfg, p, random_instance(6, 11, rng), ad::Mode::kInfer, a), ContractError);
}

TEST_CASE("predict batches by length and matches single-instance forward") {
  Rng rng(37);
  const auto cfg = small_config(AttentionKind::kAttCnn);
  auto p = init_params<double>(cfg, rng);
  randomize(p, rng);
  std::vector<features::FeatureMatrix> xs;
  for (std::size_t len : {4u, 5u, 4u, 4u, 6u, 5u}) xs.push_back(random_instance(len, cfg.input_dim, rng));
  std::vector<Tensor<double>> inputs;
  for (const auto& x : xs) inputs.push_back(to_input<double>(x));
  std::vector<const Tensor<double>*> ptrs;
  for (const auto& t : inputs) ptrs.push_back(&t);
  const auto batched = predict(cfg, p, std::span<const Tensor<double>* const>(ptrs), 2);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Rng unused(0);
    CHECK(std::fabs(batched[i] - forward(cfg, p, xs[i], ad::Mode::kInfer, unused).yhat) < 1e-12);
  }
}

TEST_CASE("full network gradients on a 3-frame toy input") {
  for (auto att : {AttentionKind::kMeanPool, AttentionKind::kAttRnn, AttentionKind::kAttCnn}) {
    for (auto merge : {DirectionMerge::kSum, DirectionMerge::kConcat}) {
      for (auto drop : {DropoutPlacement::kDropCr, DropoutPlacement::kDropAll}) {
        auto cfg = small_config(att, merge);
        cfg.dropout = drop;
        const auto res = network_grad_check(cfg, 41);
        CAPTURE(model_label(att, drop));
        CAPTURE(cli_name(merge));
        CHECK(res.checked == res.parameters);
        CHECK(res.max_rel_error < 1e-4);
      }
    }
  }
}

TEST_CASE("vectorized kernels give the same predictions as the scalar reference") {
  Rng rng(43);
  ModelConfig cfg = small_config(AttentionKind::kAttRnn);
  cfg.input_dim = features::lld::kCount;
  cfg.gru_hidden = 16;
  cfg.conv_channels = 8;
  cfg.fc_hidden = 32;
  auto p = init_params<float>(cfg, rng);
  randomize(p, rng, 0.3);
  std::vector<Tensor<float>> inputs;
  for (int i = 0; i < 4; ++i) inputs.push_back(testing::random_tensor_f({50, cfg.input_dim}, rng));
  std::vector<const Tensor<float>*> ptrs;
  for (const auto& t : inputs) ptrs.push_back(&t);
  const auto saved = kernels::active_isa();
  kernels::set_active_isa(kernels::Isa::kScalar);
  const auto ref = predict(cfg, p, std::span<const Tensor<float>* const>(ptrs));
  for (auto isa : {kernels::Isa::kAvx2, kernels::Isa::kNeon}) {
    if (!kernels::isa_supported(isa)) continue;
    kernels::set_active_isa(isa);
    const auto got = predict(cfg, p, std::span<const Tensor<float>* const>(ptrs));
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::fabs(got[i] - ref[i]) <= 1e-4f * (1.0f + std::fabs(ref[i])));
  }
  kernels::set_active_isa(saved);
}

TEST_CASE("parameter names and checkpoint round-trip") {
  Rng rng(47);
  const auto cfg = small_config(AttentionKind::kAttCnn);
  auto p = init_params<float>(cfg, rng);
  randomize(p, rng);
  const auto named = to_named(p);
  CHECK(named.front().name == "conv.kernels");
  const auto back = from_named<float>(cfg, named);
  CHECK(ad::encode_weights(to_named(back)) == ad::encode_weights(named));
  auto wrong = named;
  wrong[0].shape = {1};
  CHECK_THROWS_AS(from_named<float>(cfg, wrong), InputError);

  ModelCheckpoint ck{cfg, 9, std::nullopt, p};
  ck.norm = features::NormStats{std::vector<double>(cfg.input_dim, 0.5), std::vector<double>(cfg.input_dim, 2.0), {}};
  const auto bytes = encode_checkpoint(ck);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "DAFM");
  const auto dec = decode_checkpoint(bytes);
  CHECK(dec.seed == 9);
  CHECK(dec.config.attention == AttentionKind::kAttCnn);
  REQUIRE(dec.norm.has_value());
  CHECK(dec.norm->std[0] == 2.0);
  CHECK(encode_checkpoint(dec) == bytes);
  auto bad = bytes;
  bad.resize(bytes.size() - 3);
  CHECK_THROWS_AS(decode_checkpoint(bad), InputError);

  const auto dbl = convert<double>(p);
  const auto again = convert<float>(dbl);
  CHECK(ad::encode_weights(to_named(again)) == ad::encode_weights(named));
}
