// Copyright 2026 The momreg Authors.
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

namespace momreg {

/// Raised when a tuning parameter, block count or confidence level violates
/// one of the admissibility inequalities of the closed-form selectors. The
/// violated inequality is carried as data (name plus both sides) so front ends
/// can report it without parsing the message.
class ConfigurationError : public std::runtime_error {
 public:
  ConfigurationError(std::string constraint, double lhs, double rhs);

  const std::string& constraint() const noexcept { return constraint_; }
  double lhs() const noexcept { return lhs_; }
  double rhs() const noexcept { return rhs_; }

 private:
  std::string constraint_;
  double lhs_;
  double rhs_;
};

/// A computation would exceed a configured resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant failed (e.g. a closed-form weight vector does not
/// sum to one). Indicates a bug, not bad input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace momreg
