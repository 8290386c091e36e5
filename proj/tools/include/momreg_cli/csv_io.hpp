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

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "momreg/core.hpp"

namespace momreg::io {

/// Malformed CSV input; line() is 1-based.
class CsvError : public std::invalid_argument {
 public:
  CsvError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// 17 significant digits, which round-trips every double.
std::string format_double(double v);

/// Rows of `x1,...,xd,y`; a leading non-numeric row is taken as a header.
/// Blank lines are skipped.
Dataset read_dataset_csv(std::istream& in, const std::string& source = "<input>");
Dataset read_dataset_file(const std::string& path);

void write_dataset_csv(std::ostream& out, const Dataset& data);

/// Rows of `x1,...,xd` with an optional header, as for datasets.
std::vector<Point> read_points_csv(std::istream& in, std::size_t dim,
                                   const std::string& source = "<input>");

/// Inline points: coordinates separated by ',', points by ';'.
std::vector<Point> parse_points(const std::string& text, std::size_t dim);

}  // namespace momreg::io
