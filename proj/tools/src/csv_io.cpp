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

#include "momreg_cli/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace momreg::io {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

// Parses numeric rows of a fixed width (`width` = 0: inferred from the first
// row). Calls sink(values) per row.
template <class Sink>
void read_rows(std::istream& in, const std::string& source, std::size_t width,
               std::size_t min_width, Sink&& sink) {
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    std::vector<double> values;
    values.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      const auto v = parse_number(f);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (first) {
      first = false;
      if (width == 0) width = fields.size();
      if (width < min_width) {
        throw CsvError(source, line_no, "expected at least " + std::to_string(min_width) +
                                            " columns, found " + std::to_string(fields.size()));
      }
      if (!numeric) {
        if (fields.size() != width) {
          throw CsvError(source, line_no, "header has " + std::to_string(fields.size()) +
                                              " columns, expected " + std::to_string(width));
        }
        continue;
      }
    }
    if (fields.size() != width) {
      throw CsvError(source, line_no, "expected " + std::to_string(width) + " columns, found " +
                                          std::to_string(fields.size()));
    }
    if (!numeric) throw CsvError(source, line_no, "non-numeric field");
    for (double v : values) {
      if (!std::isfinite(v)) throw CsvError(source, line_no, "non-finite value");
    }
    sink(values);
  }
}

}  // namespace

CsvError::CsvError(const std::string& source, std::size_t line, const std::string& what)
    : std::invalid_argument(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Dataset read_dataset_csv(std::istream& in, const std::string& source) {
  std::vector<double> features;
  std::vector<double> responses;
  std::size_t width = 0;
  read_rows(in, source, 0, 2, [&](const std::vector<double>& row) {
    width = row.size();
    features.insert(features.end(), row.begin(), row.end() - 1);
    responses.push_back(row.back());
  });
  if (responses.empty()) throw CsvError(source, 0, "no data rows");
  return Dataset(width - 1, std::move(features), std::move(responses));
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dataset file '" + path + "'");
  return read_dataset_csv(in, path);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t a = 0; a < data.dim(); ++a) out << 'x' << a + 1 << ',';
  out << "y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double c : data.point(i)) out << format_double(c) << ',';
    out << format_double(data.response(i)) << '\n';
  }
}

std::vector<Point> read_points_csv(std::istream& in, std::size_t dim, const std::string& source) {
  std::vector<Point> points;
  read_rows(in, source, dim, 1, [&](const std::vector<double>& row) { points.push_back(row); });
  return points;
}

std::vector<Point> parse_points(const std::string& text, std::size_t dim) {
  std::vector<Point> points;
  for (const auto& chunk : split(text, ';')) {
    if (chunk.empty()) continue;
    Point p;
    for (const auto& f : split(chunk, ',')) {
      const auto v = parse_number(f);
      if (!v || !std::isfinite(*v)) {
        throw std::invalid_argument("query '" + chunk + "': bad coordinate '" + f + "'");
      }
      p.push_back(*v);
    }
    if (p.size() != dim) {
      throw std::invalid_argument("query '" + chunk + "' has " + std::to_string(p.size()) +
                                  " coordinates, data has " + std::to_string(dim));
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw std::invalid_argument("no query points given");
  return points;
}

}  // namespace momreg::io
