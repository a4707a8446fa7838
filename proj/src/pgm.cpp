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

#include "irisnet/pgm.hpp"

#include <cctype>
#include <fstream>
#include <string>

#include "irisnet/error.hpp"

namespace irisnet {

namespace {

// Skips whitespace and '#' comments between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (ch != EOF && std::isspace(ch)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const std::filesystem::path& path) {
  skip_separators(in);
  int value = -1;
  if (!(in >> value) || value <= 0) {
    throw DataError("malformed PGM header in " + path.string());
  }
  return value;
}

PgmHeader parse_header(std::istream& in, const std::filesystem::path& path) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw DataError("not a binary PGM (P5) file: " + path.string());
  }
  PgmHeader h;
  h.width = read_header_int(in, path);
  h.height = read_header_int(in, path);
  h.maxval = read_header_int(in, path);
  if (h.maxval > 255) {
    throw DataError("16-bit PGM not supported: " + path.string());
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (!std::isspace(in.get())) {
    throw DataError("malformed PGM header in " + path.string());
  }
  return h;
}

std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  return in;
}

}  // namespace

PgmHeader read_pgm_header(const std::filesystem::path& path) {
  auto in = open_binary(path);
  return parse_header(in, path);
}

Grid<std::uint8_t> read_pgm(const std::filesystem::path& path) {
  auto in = open_binary(path);
  const PgmHeader h = parse_header(in, path);
  Grid<std::uint8_t> image(h.height, h.width);
  in.read(reinterpret_cast<char*>(image.values().data()),
          static_cast<std::streamsize>(image.size()));
  if (static_cast<std::size_t>(in.gcount()) != image.size()) {
    throw DataError("truncated PGM raster in " + path.string());
  }
  return image;
}

void write_pgm(const std::filesystem::path& path, const Grid<std::uint8_t>& image) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.values().data()),
            static_cast<std::streamsize>(image.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace irisnet
