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

#include "ddmag/csv.hpp"

#include <charconv>
#include <cmath>

#include "ddmag/types.hpp"

namespace ddmag {

namespace {
constexpr std::string_view kSep = ", ";
}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(out), columns_(header.size()) {
  bool first = true;
  for (auto h : header) {
    if (!first) out_ << kSep;
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  if (values.size() != columns_) throw InvalidArgument("CSV row width mismatch");
  bool first = true;
  for (double v : values) {
    if (!first) out_ << kSep;
    out_ << format_double(v);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values, long long tail) {
  if (values.size() + 1 != columns_) throw InvalidArgument("CSV row width mismatch");
  for (double v : values) out_ << format_double(v) << kSep;
  out_ << tail << '\n';
}

void Report::add(std::string key, double value) { entries_.emplace_back(std::move(key), format_double(value)); }

void Report::add(std::string key, long long value) {
  entries_.emplace_back(std::move(key), std::to_string(value));
}

void Report::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void Report::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

}  // namespace ddmag
