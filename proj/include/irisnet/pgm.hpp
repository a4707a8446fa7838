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

// Binary greymap (P5) reading and writing, 8 bits per pixel only.

#ifndef IRISNET_PGM_HPP_
#define IRISNET_PGM_HPP_

#include <cstdint>
#include <filesystem>

#include "irisnet/matrix.hpp"

namespace irisnet {

struct PgmHeader {
  int width = 0;
  int height = 0;
  int maxval = 0;
};

/// Reads only the header. Throws DataError on a missing or malformed file.
PgmHeader read_pgm_header(const std::filesystem::path& path);

/// Reads a P5 file with maxval <= 255.
Grid<std::uint8_t> read_pgm(const std::filesystem::path& path);

/// Writes a P5 file with maxval 255. Creates parent directories.
void write_pgm(const std::filesystem::path& path, const Grid<std::uint8_t>& image);

}  // namespace irisnet

#endif  // IRISNET_PGM_HPP_
