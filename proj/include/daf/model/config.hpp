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
#include <string_view>

#include "daf/features/lld.hpp"

namespace daf::model {

enum class AttentionKind { kMeanPool, kAttRnn, kAttCnn };
enum class DropoutPlacement { kDropAll, kDropCr };
enum class DirectionMerge { kSum, kConcat };

// CLI spellings: "no" | "rnn" | "cnn", "all" | "cr", "sum" | "concat".
AttentionKind parse_attention(std::string_view s);
DropoutPlacement parse_dropout(std::string_view s);
DirectionMerge parse_merge(std::string_view s);
std::string_view cli_name(AttentionKind a);
std::string_view cli_name(DropoutPlacement d);
std::string_view cli_name(DirectionMerge m);
// Reporting labels, e.g. "ATT(R)+DROP(CR)".
std::string model_label(AttentionKind a, DropoutPlacement d);

struct ModelConfig {
  std::size_t input_dim = features::lld::kCount;
  std::size_t conv_channels = 32;
  std::size_t conv_width = 8;
  std::size_t pool_width = 3;
  std::size_t pool_stride = 2;
  std::size_t gru_hidden = 128;
  std::size_t gru_layers = 2;
  DirectionMerge direction_merge = DirectionMerge::kSum;
  std::size_t fc_hidden = 512;
  AttentionKind attention = AttentionKind::kMeanPool;
  DropoutPlacement dropout = DropoutPlacement::kDropCr;
  double dropout_p = 0.10;

  // Throws ContractError on impossible dimensions.
  void validate() const;

  std::size_t conv_out_dim() const { return input_dim - conv_width + 1; }
  std::size_t pooled_dim() const { return (conv_out_dim() - pool_width) / pool_stride + 1; }
  // Width of the per-frame CNN output f_t (channels x pooled positions).
  std::size_t cnn_feature_dim() const { return conv_channels * pooled_dim(); }
  // Width of h_t after merging directions; also the FC input width.
  std::size_t rnn_output_dim() const {
    return direction_merge == DirectionMerge::kSum ? gru_hidden : 2 * gru_hidden;
  }
  // Length of the attention vector w; 0 for mean pooling.
  std::size_t attention_dim() const;
};

std::string config_to_json(const ModelConfig& cfg);
ModelConfig config_from_json(const std::string& text);

}  // namespace daf::model
