// Copyright 2026 The AIQT Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aiqt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed argument: wrong length, non-finite angle, out-of-range budget.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Input that cannot be normalized (zero vector, all retained coefficients
/// zero).
class DegenerateInput : public Error {
  public:
    using Error::Error;
};

/// Request exceeds a cost guard (dense matrices, finite-difference oracle).
class ResourceLimit : public Error {
  public:
    using Error::Error;
};

/// A non-finite value showed up while differentiating.
class NumericFailure : public Error {
  public:
    NumericFailure(const std::string &what, std::size_t parameter_index)
        : Error(what), parameter_index_(parameter_index) {}
    [[nodiscard]] std::size_t parameter_index() const noexcept {
        return parameter_index_;
    }

  private:
    std::size_t parameter_index_;
};

/// Malformed or unreadable file.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Power-law fit refused (too few points, non-positive values).
class FitRefused : public Error {
  public:
    using Error::Error;
};

} // namespace aiqt
