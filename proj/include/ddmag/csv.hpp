// Copyright 2026 The ddmag Authors
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

// CSV and key=value report writers. Numbers use 17 significant digits with a
// '.' decimal point regardless of locale.

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ddmag {

std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

  void row(std::initializer_list<double> values);
  /// Trailing integer column, e.g. a flag.
  void row(std::initializer_list<double> values, long long tail);

  std::size_t columns() const { return columns_; }

 private:
  std::ostream& out_;
  std::size_t columns_;
};

class Report {
 public:
  void add(std::string key, double value);
  void add(std::string key, long long value);
  void add(std::string key, std::string value);
  void write(std::ostream& out) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace ddmag
