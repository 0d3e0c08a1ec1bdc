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

#include <stdexcept>
#include <string>

namespace daf {

// Base for every error the library raises. The CLI maps the subclasses to
// process exit codes (2 input, 3 numeric, 4 contract).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or missing input data: files, CSV rows, CLI arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

// A computation produced or received a non-finite value, or a statistic is
// undefined for the given data.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A precondition on shapes, sizes or configuration was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace daf
