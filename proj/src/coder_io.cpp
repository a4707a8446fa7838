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

// File formats owned by the coder: kernel banks, sampling maps, heatmaps and
// packed iris codes.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "irisnet/coder.hpp"
#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/pgm.hpp"

namespace irisnet {

namespace {

std::ofstream open_output(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw DataError("cannot write file: " + path.string());
  return out;
}

// Non-blank lines with their 1-based line numbers.
std::vector<std::pair<int, std::string>> content_lines(const std::filesystem::path& path,
                                                       bool skip_comments) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::vector<std::pair<int, std::string>> lines;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (skip_comments && line[line.find_first_not_of(" \t")] == '#') continue;
    lines.emplace_back(number, line);
  }
  return lines;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::string where(const std::filesystem::path& path, int line) {
  return path.string() + ":" + std::to_string(line);
}

}  // namespace

// --- sampling maps -------------------------------------------------------------

SamplingMap load_sampling_map(const std::filesystem::path& path) {
  auto lines = content_lines(path, true);
  bool per_map = false;
  if (!lines.empty() && tokens(lines.front().second) == std::vector<std::string>{"per-map"}) {
    per_map = true;
    lines.erase(lines.begin());
  }
  const std::size_t expected = static_cast<std::size_t>(per_map ? kCodeLength : kPointsPerMap);
  if (lines.size() != expected) {
    throw DataError(path.string() + ": expected " + std::to_string(expected) +
                    " sampling points, found " + std::to_string(lines.size()));
  }
  std::vector<SamplePoint> pts;
  pts.reserve(lines.size());
  for (const auto& [number, text] : lines) {
    const auto t = tokens(text);
    if (t.size() != 2) throw DataError(where(path, number) + ": expected `row col`");
    pts.push_back({static_cast<int>(csv::parse_int(t[0], where(path, number))),
                   static_cast<int>(csv::parse_int(t[1], where(path, number)))});
  }
  if (!per_map) return SamplingMap(kIrisRows, kIrisCols, std::move(pts));
  std::vector<std::vector<SamplePoint>> lists(kBankSize);
  for (int k = 0; k < kBankSize; ++k) {
    lists[k].assign(pts.begin() + k * kPointsPerMap, pts.begin() + (k + 1) * kPointsPerMap);
  }
  return SamplingMap(kIrisRows, kIrisCols, std::move(lists));
}

void save_sampling_map(const SamplingMap& map, const std::filesystem::path& path) {
  auto out = open_output(path);
  const int lists = map.is_per_map() ? kBankSize : 1;
  if (map.is_per_map()) out << "per-map\n";
  for (int k = 0; k < lists; ++k) {
    for (const auto& p : map.points(k)) out << p.row << ' ' << p.col << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

// --- kernel banks ----------------------------------------------------------------

void save_kernels(const KernelBank& bank, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << bank.kernels().size() << '\n';
  for (const auto& k : bank.kernels()) {
    out << k.rows() << ' ' << k.cols() << '\n';
    for (int r = 0; r < k.rows(); ++r) {
      for (int c = 0; c < k.cols(); ++c) {
        if (c > 0) out << ' ';
        out << csv::format_double(k(r, c));
      }
      out << '\n';
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

KernelBank load_kernels(const std::filesystem::path& path) {
  const auto lines = content_lines(path, false);
  std::size_t at = 0;
  auto next = [&]() -> const std::pair<int, std::string>& {
    if (at >= lines.size()) throw DataError(path.string() + ": unexpected end of kernel file");
    return lines[at++];
  };

  const auto& [count_line, count_text] = next();
  const auto count_tokens = tokens(count_text);
  if (count_tokens.size() != 1) throw DataError(where(path, count_line) + ": expected kernel count");
  const long long count = csv::parse_int(count_tokens[0], where(path, count_line));
  if (count != kBankSize) {
    throw DataError(path.string() + ": kernel bank must declare 6 kernels, found " +
                    std::to_string(count));
  }

  std::vector<Matrix> kernels;
  for (long long k = 0; k < count; ++k) {
    const auto& [dim_line, dim_text] = next();
    const auto dims = tokens(dim_text);
    if (dims.size() != 2) throw DataError(where(path, dim_line) + ": expected `rows cols`");
    const long long rows = csv::parse_int(dims[0], where(path, dim_line));
    const long long cols = csv::parse_int(dims[1], where(path, dim_line));
    if (rows <= 0 || cols <= 0 || rows % 2 == 0 || cols % 2 == 0 || rows > 4096 || cols > 4096) {
      throw DataError(where(path, dim_line) + ": kernel dimensions must be odd and positive, got " +
                      std::to_string(rows) + "x" + std::to_string(cols));
    }
    Matrix m(static_cast<int>(rows), static_cast<int>(cols));
    for (int r = 0; r < m.rows(); ++r) {
      const auto& [row_line, row_text] = next();
      const auto values = tokens(row_text);
      if (values.size() != static_cast<std::size_t>(cols)) {
        throw DataError(where(path, row_line) + ": expected " + std::to_string(cols) + " weights");
      }
      for (int c = 0; c < m.cols(); ++c) m(r, c) = csv::parse_double(values[c], where(path, row_line));
    }
    kernels.push_back(std::move(m));
  }
  if (at != lines.size()) throw DataError(path.string() + ": trailing data after last kernel");
  return KernelBank(std::move(kernels));
}

// --- heatmaps --------------------------------------------------------------------

Grid<std::uint8_t> kernel_heatmap(const Matrix& kernel) {
  Grid<std::uint8_t> img(kernel.rows(), kernel.cols(), 128);
  if (kernel.empty()) return img;
  const auto [lo, hi] = std::minmax_element(kernel.values().begin(), kernel.values().end());
  if (!(*hi > *lo)) return img;
  const double scale = 255.0 / (*hi - *lo);
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    img.values()[i] = static_cast<std::uint8_t>(std::lround((kernel.values()[i] - *lo) * scale));
  }
  return img;
}

void export_kernel_heatmaps(const KernelBank& bank, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < bank.kernels().size(); ++i) {
    const auto& k = bank.kernel(i);
    const std::string stem = "kernel_" + std::to_string(i);
    write_pgm(dir / (stem + ".pgm"), kernel_heatmap(k));
    auto out = open_output(dir / (stem + ".csv"));
    for (int r = 0; r < k.rows(); ++r) {
      for (int c = 0; c < k.cols(); ++c) {
        if (c > 0) out << ',';
        out << csv::format_double(k(r, c));
      }
      out << '\n';
    }
    if (!out) throw DataError("write failed: " + (dir / (stem + ".csv")).string());
  }
}

// --- packed iris codes -------------------------------------------------------------

namespace {

constexpr char kCodeMagic[4] = {'I', 'R', 'C', '1'};
constexpr std::size_t kPlaneBytes = kCodeLength / 8;

void pack_plane(const Bits& bits, std::vector<char>& out) {
  for (std::size_t byte = 0; byte < kPlaneBytes; ++byte) {
    unsigned value = 0;
    for (std::size_t b = 0; b < 8; ++b) value = (value << 1) | (bits[byte * 8 + b] ? 1u : 0u);
    out.push_back(static_cast<char>(value));
  }
}

Bits unpack_plane(const char* data) {
  Bits bits(kCodeLength);
  for (std::size_t byte = 0; byte < kPlaneBytes; ++byte) {
    const auto value = static_cast<unsigned char>(data[byte]);
    for (std::size_t b = 0; b < 8; ++b) bits[byte * 8 + b] = (value >> (7 - b)) & 1u;
  }
  return bits;
}

}  // namespace

void write_iris_code(const std::filesystem::path& path, const IrisCode& code) {
  if (code.bits.size() != kCodeLength || code.mask_bits.size() != kCodeLength) {
    throw DataError("iris code must hold 1536 bits and 1536 mask bits");
  }
  std::vector<char> buffer(kCodeMagic, kCodeMagic + 4);
  pack_plane(code.bits, buffer);
  pack_plane(code.mask_bits, buffer);
  auto out = open_output(path, true);
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

IrisCode read_iris_code(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open iris code: " + path.string());
  std::vector<char> buffer(4 + 2 * kPlaneBytes + 1);
  in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (static_cast<std::size_t>(in.gcount()) != 4 + 2 * kPlaneBytes) {
    throw DataError("iris code file has wrong size: " + path.string());
  }
  if (!std::equal(kCodeMagic, kCodeMagic + 4, buffer.begin())) {
    throw DataError("not an iris code file (bad magic): " + path.string());
  }
  return {unpack_plane(buffer.data() + 4), unpack_plane(buffer.data() + 4 + kPlaneBytes)};
}

}  // namespace irisnet
