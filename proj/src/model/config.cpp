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

#include "daf/model/config.hpp"

#include <cmath>
#include <string>

#include "daf/common/error.hpp"
#include "json.hpp"

namespace daf::model {

AttentionKind parse_attention(std::string_view s) {
  if (s == "no") return AttentionKind::kMeanPool;
  if (s == "rnn") return AttentionKind::kAttRnn;
  if (s == "cnn") return AttentionKind::kAttCnn;
  throw InputError("unknown attention kind '" + std::string(s) + "' (expected no, rnn or cnn)");
}

DropoutPlacement parse_dropout(std::string_view s) {
  if (s == "all") return DropoutPlacement::kDropAll;
  if (s == "cr") return DropoutPlacement::kDropCr;
  throw InputError("unknown dropout placement '" + std::string(s) + "' (expected all or cr)");
}

DirectionMerge parse_merge(std::string_view s) {
  if (s == "sum") return DirectionMerge::kSum;
  if (s == "concat") return DirectionMerge::kConcat;
  throw InputError("unknown direction merge '" + std::string(s) + "' (expected sum or concat)");
}

std::string_view cli_name(AttentionKind a) {
  switch (a) {
    case AttentionKind::kMeanPool: return "no";
    case AttentionKind::kAttRnn: return "rnn";
    case AttentionKind::kAttCnn: return "cnn";
  }
  return "?";
}

std::string_view cli_name(DropoutPlacement d) {
  return d == DropoutPlacement::kDropAll ? "all" : "cr";
}

std::string_view cli_name(DirectionMerge m) {
  return m == DirectionMerge::kSum ? "sum" : "concat";
}

std::string model_label(AttentionKind a, DropoutPlacement d) {
  std::string att;
  switch (a) {
    case AttentionKind::kMeanPool: att = "ATT(NO)"; break;
    case AttentionKind::kAttRnn: att = "ATT(R)"; break;
    case AttentionKind::kAttCnn: att = "ATT(C)"; break;
  }
  return att + (d == DropoutPlacement::kDropAll ? "+DROP(ALL)" : "+DROP(CR)");
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ContractError("model config: " + msg); };
  if (input_dim == 0) fail("input_dim must be positive");
  if (conv_channels == 0) fail("conv_channels must be positive");
  if (conv_width == 0 || conv_width > input_dim) fail("conv_width must be in [1, input_dim]");
  if (pool_width == 0 || pool_stride == 0) fail("pool width and stride must be positive");
  if (conv_out_dim() < pool_width) fail("conv output narrower than the pooling window");
  if (gru_hidden == 0) fail("gru_hidden must be positive");
  if (gru_layers == 0) fail("gru_layers must be positive");
  if (fc_hidden == 0) fail("fc_hidden must be positive");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) fail("dropout_p must be in [0, 1)");
}

std::size_t ModelConfig::attention_dim() const {
  switch (attention) {
    case AttentionKind::kMeanPool: return 0;
    case AttentionKind::kAttRnn: return rnn_output_dim();
    case AttentionKind::kAttCnn: return cnn_feature_dim();
  }
  return 0;
}

std::string config_to_json(const ModelConfig& cfg) {
  nlohmann::json j;
  j["input_dim"] = cfg.input_dim;
  j["conv_channels"] = cfg.conv_channels;
  j["conv_width"] = cfg.conv_width;
  j["pool_width"] = cfg.pool_width;
  j["pool_stride"] = cfg.pool_stride;
  j["gru_hidden"] = cfg.gru_hidden;
  j["gru_layers"] = cfg.gru_layers;
  j["direction_merge"] = cli_name(cfg.direction_merge);
  j["fc_hidden"] = cfg.fc_hidden;
  j["attention"] = cli_name(cfg.attention);
  j["dropout"] = cli_name(cfg.dropout);
  j["dropout_p"] = cfg.dropout_p;
  return j.dump();
}

ModelConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model config: ") + e.what());
  }
  ModelConfig cfg;
  try {
    cfg.input_dim = j.at("input_dim").get<std::size_t>();
    cfg.conv_channels = j.at("conv_channels").get<std::size_t>();
    cfg.conv_width = j.at("conv_width").get<std::size_t>();
    cfg.pool_width = j.at("pool_width").get<std::size_t>();
    cfg.pool_stride = j.at("pool_stride").get<std::size_t>();
    cfg.gru_hidden = j.at("gru_hidden").get<std::size_t>();
    cfg.gru_layers = j.at("gru_layers").get<std::size_t>();
    cfg.direction_merge = parse_merge(j.at("direction_merge").get<std::string>());
    cfg.fc_hidden = j.at("fc_hidden").get<std::size_t>();
    cfg.attention = parse_attention(j.at("attention").get<std::string>());
    cfg.dropout = parse_dropout(j.at("dropout").get<std::string>());
    cfg.dropout_p = j.at("dropout_p").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace daf::model
