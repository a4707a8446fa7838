// Copyright 2026 The irisnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "irisnet/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "irisnet/error.hpp"

namespace irisnet::csv {

Row split(const std::string& line, char sep) {
  Row fields;
  std::string current;
  for (char ch : line) {
    if (ch == sep) {
      fields.push_back(std::move(current));
      current.clear();
    } else if (ch != '\r') {
      current.push_back(ch);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::vector<Row> read(const std::filesystem::path& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::vector<Row> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && !header.empty()) {
      first = false;
      // Tolerate a UTF-8 byte order mark.
      if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (line != header) {
        throw DataError(path.string() + ": expected header '" + header + "', got '" + line + "'");
      }
      continue;
    }
    first = false;
    if (line.empty()) continue;
    rows.push_back(split(line));
  }
  if (first && !header.empty()) throw DataError(path.string() + ": missing header");
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& what) {
  if (text.empty()) throw DataError("empty number for " + what);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw DataError("malformed number '" + text + "' for " + what);
  }
  return v;
}

long long parse_int(const std::string& text, const std::string& what) {
  if (text.empty()) throw DataError("empty integer for " + what);
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw DataError("malformed integer '" + text + "' for " + what);
  }
  return v;
}

}  // namespace irisnet::csv
