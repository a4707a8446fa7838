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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/iris_data.hpp"
#include "irisnet/pgm.hpp"

namespace irisnet {

namespace {

std::string shape_string(int rows, int cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void require_iris_shape(int rows, int cols, const std::string& what) {
  if (rows != kIrisRows || cols != kIrisCols) {
    throw DataError(what + " has size " + shape_string(rows, cols) + ", expected " +
                    shape_string(kIrisRows, kIrisCols));
  }
}

}  // namespace

NormalizedIris::NormalizedIris(Matrix pixels) : pixels_(std::move(pixels)) {
  require_iris_shape(pixels_.rows(), pixels_.cols(), "iris image");
  for (double v : pixels_.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw DataError("iris pixel outside [0,1]");
  }
}

NormalizedIris NormalizedIris::from_bytes(const Grid<std::uint8_t>& bytes) {
  Matrix m(bytes.rows(), bytes.cols());
  for (std::size_t i = 0; i < bytes.size(); ++i) m.values()[i] = bytes.values()[i] / 255.0;
  return NormalizedIris(std::move(m));
}

OcclusionMask::OcclusionMask(BitGrid bits) : bits_(std::move(bits)) {
  require_iris_shape(bits_.rows(), bits_.cols(), "occlusion mask");
  for (auto v : bits_.values()) {
    if (v > 1) throw DataError("occlusion mask value outside {0,1}");
  }
}

OcclusionMask OcclusionMask::from_bytes(const Grid<std::uint8_t>& bytes) {
  BitGrid bits(bytes.rows(), bytes.cols());
  for (std::size_t i = 0; i < bytes.size(); ++i) bits.values()[i] = bytes.values()[i] >= 128 ? 1 : 0;
  return OcclusionMask(std::move(bits));
}

NormalizedIris load_iris_image(const std::filesystem::path& path) {
  const auto bytes = read_pgm(path);
  require_iris_shape(bytes.rows(), bytes.cols(), path.string());
  return NormalizedIris::from_bytes(bytes);
}

OcclusionMask load_occlusion_mask(const std::filesystem::path& path) {
  const auto bytes = read_pgm(path);
  require_iris_shape(bytes.rows(), bytes.cols(), path.string());
  return OcclusionMask::from_bytes(bytes);
}

Grid<std::uint8_t> to_bytes(const Matrix& pixels) {
  Grid<std::uint8_t> out(pixels.rows(), pixels.cols());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double v = std::clamp(pixels.values()[i], 0.0, 1.0);
    out.values()[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  return out;
}

Grid<std::uint8_t> mask_to_bytes(const BitGrid& mask) {
  Grid<std::uint8_t> out(mask.rows(), mask.cols());
  for (std::size_t i = 0; i < mask.size(); ++i) out.values()[i] = mask.values()[i] ? 255 : 0;
  return out;
}

std::string to_string(EyeSide side) {
  switch (side) {
    case EyeSide::left: return "left";
    case EyeSide::right: return "right";
    case EyeSide::unknown: return "unknown";
  }
  return "unknown";
}

EyeSide parse_eye_side(const std::string& text) {
  if (text == "left" || text == "L") return EyeSide::left;
  if (text == "right" || text == "R") return EyeSide::right;
  if (text == "unknown" || text.empty()) return EyeSide::unknown;
  throw DataError("invalid eye_side '" + text + "'");
}

DatasetManifest DatasetManifest::from_entries(std::vector<ManifestEntry> entries) {
  for (const auto& e : entries) {
    if (e.class_id.empty()) throw DataError("manifest entry with empty class_id: " + e.image);
  }
  std::sort(entries.begin(), entries.end(), [](const ManifestEntry& a, const ManifestEntry& b) {
    return std::tie(a.class_id, a.image) < std::tie(b.class_id, b.image);
  });

  DatasetManifest m;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (i > 0 && entries[i - 1].class_id == e.class_id && entries[i - 1].image == e.image) {
      throw DataError("duplicate manifest entry: " + e.class_id + "," + e.image);
    }
    if (m.classes_.empty() || m.classes_.back().class_id != e.class_id) {
      m.classes_.push_back({e.class_id, e.side, {}});
    } else if (m.classes_.back().side != e.side) {
      throw DataError("class " + e.class_id + " mixes eye sides");
    }
    m.classes_.back().members.push_back(i);
  }
  m.entries_ = std::move(entries);
  return m;
}

NormalizedIris DatasetManifest::load_image(std::size_t index) const {
  return load_iris_image(entries_.at(index).image_file);
}

OcclusionMask DatasetManifest::load_mask(std::size_t index) const {
  return load_occlusion_mask(entries_.at(index).mask_file);
}

DatasetManifest load_dataset(const std::filesystem::path& manifest_path) {
  const auto rows = csv::read(manifest_path, "class_id,eye_side,image,mask");
  const auto base = manifest_path.parent_path();
  std::vector<ManifestEntry> entries;
  entries.reserve(rows.size());
  std::size_t line = 1;
  for (const auto& row : rows) {
    ++line;
    if (row.size() != 4) {
      throw DataError(manifest_path.string() + ":" + std::to_string(line) +
                      ": expected 4 fields");
    }
    ManifestEntry e;
    e.class_id = row[0];
    e.side = parse_eye_side(row[1]);
    e.image = row[2];
    e.mask = row[3];
    e.image_file = std::filesystem::path(e.image).is_absolute() ? std::filesystem::path(e.image) : base / e.image;
    e.mask_file = std::filesystem::path(e.mask).is_absolute() ? std::filesystem::path(e.mask) : base / e.mask;
    for (const auto* file : {&e.image_file, &e.mask_file}) {
      if (!std::filesystem::exists(*file)) throw DataError("missing file: " + file->string());
    }
    const auto ih = read_pgm_header(e.image_file);
    require_iris_shape(ih.height, ih.width, e.image_file.string());
    const auto mh = read_pgm_header(e.mask_file);
    if (mh.height != ih.height || mh.width != ih.width) {
      throw DataError("mask/image shape mismatch: " + e.mask_file.string());
    }
    entries.push_back(std::move(e));
  }
  return DatasetManifest::from_entries(std::move(entries));
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "class_id,eye_side,image,mask\n";
  for (const auto& e : entries) {
    out << e.class_id << ',' << to_string(e.side) << ',' << e.image << ',' << e.mask << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace irisnet
