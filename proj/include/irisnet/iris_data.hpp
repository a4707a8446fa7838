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

// Dataset ingestion: normalized iris images and masks, class manifests,
// genuine/impostor comparison lists and intra-class rotation alignment.

#ifndef IRISNET_IRIS_DATA_HPP_
#define IRISNET_IRIS_DATA_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "irisnet/matrix.hpp"

namespace irisnet {

inline constexpr int kIrisRows = 64;
inline constexpr int kIrisCols = 512;

/// 64x512 unwrapped iris texture, intensities in [0,1].
class NormalizedIris {
 public:
  /// Throws DataError unless the shape is 64x512 and every pixel is in [0,1].
  explicit NormalizedIris(Matrix pixels);

  /// 8-bit source pixels divided by 255.
  static NormalizedIris from_bytes(const Grid<std::uint8_t>& bytes);

  const Matrix& pixels() const { return pixels_; }

 private:
  Matrix pixels_;
};

/// 64x512 occlusion mask; 1 marks a valid iris pixel, 0 an occluded one.
class OcclusionMask {
 public:
  explicit OcclusionMask(BitGrid bits);

  /// Pixels >= 128 become 1, everything else 0.
  static OcclusionMask from_bytes(const Grid<std::uint8_t>& bytes);

  const BitGrid& bits() const { return bits_; }

 private:
  BitGrid bits_;
};

NormalizedIris load_iris_image(const std::filesystem::path& path);
OcclusionMask load_occlusion_mask(const std::filesystem::path& path);

/// Quantizes to 8 bits (round to nearest) for writing.
Grid<std::uint8_t> to_bytes(const Matrix& pixels);
Grid<std::uint8_t> mask_to_bytes(const BitGrid& mask);

enum class EyeSide { left, right, unknown };

std::string to_string(EyeSide side);
EyeSide parse_eye_side(const std::string& text);

struct ManifestEntry {
  std::string class_id;
  EyeSide side = EyeSide::unknown;
  std::string image;  // path as written in the manifest; the entry's identity
  std::string mask;
  std::filesystem::path image_file;  // resolved for I/O
  std::filesystem::path mask_file;
};

struct ClassGroup {
  std::string class_id;
  EyeSide side = EyeSide::unknown;
  std::vector<std::size_t> members;  // indices into DatasetManifest::entries()
};

/// Immutable, validated list of dataset entries, sorted by (class_id, image)
/// and grouped by class.
class DatasetManifest {
 public:
  DatasetManifest() = default;

  /// Validates and sorts. Throws DataError on an empty class id, a duplicate
  /// (class, image) row, or a class mixing eye sides.
  static DatasetManifest from_entries(std::vector<ManifestEntry> entries);

  const std::vector<ManifestEntry>& entries() const { return entries_; }
  const std::vector<ClassGroup>& classes() const { return classes_; }
  std::size_t size() const { return entries_.size(); }

  NormalizedIris load_image(std::size_t index) const;
  OcclusionMask load_mask(std::size_t index) const;

 private:
  std::vector<ManifestEntry> entries_;
  std::vector<ClassGroup> classes_;
};

/// Parses a `class_id,eye_side,image,mask` CSV. Relative paths resolve
/// against the manifest's directory. Every referenced file must exist and
/// carry a 64x512 header.
DatasetManifest load_dataset(const std::filesystem::path& manifest_path);

/// Writes the manifest CSV with entries' `image`/`mask` strings verbatim.
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

enum class PairKind { genuine, impostor };

std::string to_string(PairKind kind);
PairKind parse_pair_kind(const std::string& text);

struct IndexPair {
  std::size_t a = 0;
  std::size_t b = 0;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

struct PairList {
  PairKind kind = PairKind::genuine;
  std::vector<IndexPair> pairs;
};

/// Every unordered within-class pair, classes in manifest order.
PairList generate_genuine_pairs(const DatasetManifest& manifest);

/// For each reference class and each other class on the same eye side, one
/// comparison between a random image of each. Draws are keyed by
/// (seed, reference class id, comparison index); `unknown` sides form one group.
PairList generate_impostor_pairs(const DatasetManifest& manifest, std::uint64_t seed);

/// Pair rows referring to images by manifest path.
struct PathPair {
  std::string a;
  std::string b;
  PairKind kind = PairKind::genuine;
};

std::vector<PathPair> to_path_pairs(const DatasetManifest& manifest, const PairList& list);
void write_pairs_csv(const std::filesystem::path& path, const std::vector<PathPair>& pairs);
std::vector<PathPair> read_pairs_csv(const std::filesystem::path& path);

/// Sample Pearson correlation over all pixels. Zero variance in either input
/// yields 0.
double pearson_cc(const Matrix& a, const Matrix& b);

struct AlignmentResult {
  std::size_t reference_index = 0;
  std::vector<int> shifts;  // column shift applied to each image, in [0, cols)
};

struct AlignedClass {
  AlignmentResult alignment;
  std::vector<Matrix> images;
  std::vector<BitGrid> masks;
};

/// Picks the image with the highest mean PCC against the rest of the class
/// (ties to the lowest index) and circularly shifts every other image and its
/// mask to the column shift maximizing PCC with it (ties to the smallest shift).
AlignedClass align_class(std::span<const Matrix> images, std::span<const BitGrid> masks);

}  // namespace irisnet

#endif  // IRISNET_IRIS_DATA_HPP_
