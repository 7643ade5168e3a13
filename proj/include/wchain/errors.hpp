// Copyright 2026 The wchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace wchain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed chain geometry (wrong coupling counts, too few sites, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Noise field keyed on a bond or site that the chain does not have.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Branched <-> linear mapping requested for a chain without the needed symmetry.
class MappingError : public Error {
 public:
  using Error::Error;
};

/// Bad argument to an otherwise well-defined operation.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input or a failed LAPACK call.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Metric requested on a configuration where it has no meaning (e.g. C_W with one Bob qubit).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// Oracle asked to expand a system past its resource guard.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace wchain
