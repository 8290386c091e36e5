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

#include "momreg/errors.hpp"

#include <sstream>

namespace momreg {
namespace {

std::string format_violation(const std::string& constraint, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(17);
  os << "configuration constraint '" << constraint << "' violated (lhs=" << lhs
     << ", rhs=" << rhs << ")";
  return os.str();
}

}  // namespace

ConfigurationError::ConfigurationError(std::string constraint, double lhs, double rhs)
    : std::runtime_error(format_violation(constraint, lhs, rhs)),
      constraint_(std::move(constraint)),
      lhs_(lhs),
      rhs_(rhs) {}

}  // namespace momreg
