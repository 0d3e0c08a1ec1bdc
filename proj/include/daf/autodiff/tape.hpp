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
#include <deque>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "daf/autodiff/tensor.hpp"

namespace daf::ad {

enum class Mode { kTrain, kInfer };

// Handle to a value recorded on a Tape.
struct Var {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t id = kNone;
  bool valid() const { return id != kNone; }
};

// Records operations in execution order and replays their backward rules in
// exact reverse. Parameters are referenced, not copied: their gradients
// accumulate into the caller's Tensor, summed over every use.
//
// A tape is single-owner and single-threaded.
template <class T>
class Tape {
 public:
  // Called with the tape and the handle of the op's own output.
  using BackwardFn = std::function<void(Tape&, Var)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor<T> value);
  // Owned leaf whose gradient is kept on the tape.
  Var variable(Tensor<T> value);
  // External leaf; `param` must outlive the tape.
  Var parameter(Tensor<T>& param);
  // External read-only leaf without gradient; `value` must outlive the tape.
  Var constant_ref(const Tensor<T>& value);

  // Appends an op result. The node requires grad iff any input does; the
  // backward rule is dropped otherwise.
  Var record(Tensor<T> value, std::initializer_list<Var> inputs, BackwardFn backward);

  const Tensor<T>& value(Var v) const;
  const Shape& shape(Var v) const { return value(v).shape(); }
  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }
  // Gradient buffer, zero-filled on first access.
  std::span<T> grad(Var v);
  std::size_t size() const { return nodes_.size(); }

  // Seeds d(loss)/d(loss) = 1 and runs every recorded backward rule in
  // reverse. Throws ContractError unless `loss` holds exactly one element.
  void backward(Var loss);

 private:
  struct Node {
    Tensor<T> owned;
    const Tensor<T>* view = nullptr;
    Tensor<T>* external = nullptr;
    bool requires_grad = false;
    std::vector<T> grad;
  };
  struct Step {
    std::size_t output;
    BackwardFn fn;
  };
  const Node& node(Var v) const;

  std::deque<Node> nodes_;
  std::vector<Step> steps_;
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace daf::ad
