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

// Minimal comma-separated text helpers. Fields never contain commas or quotes
// in any file this project reads or writes.

#ifndef IRISNET_CSV_HPP_
#define IRISNET_CSV_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace irisnet::csv {

using Row = std::vector<std::string>;

Row split(const std::string& line, char sep = ',');

/// Reads all non-empty lines. When `header` is nonempty the first line must
/// equal it. Throws DataError otherwise or when the file cannot be opened.
std::vector<Row> read(const std::filesystem::path& path, const std::string& header);

/// Shortest decimal string that parses back to exactly `v` (17 significant digits).
std::string format_double(double v);

/// Strict parse; throws DataError naming `what` on failure.
double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);

}  // namespace irisnet::csv

#endif  // IRISNET_CSV_HPP_
