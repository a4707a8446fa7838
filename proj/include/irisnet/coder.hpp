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

// Kernel bank, bit-sampling layer and iris code production.
//
// A feature vector is laid out map-major: the sampled points of kernel 0,
// then those of kernel 1, and so on. With the standard 256-point map and six
// kernels that is 1536 values.

#ifndef IRISNET_CODER_HPP_
#define IRISNET_CODER_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "irisnet/iris_data.hpp"
#include "irisnet/matrix.hpp"

namespace irisnet {

inline constexpr int kBankSize = 6;
inline constexpr int kPointsPerMap = 256;
inline constexpr int kCodeLength = kBankSize * kPointsPerMap;

/// Exactly six kernels with odd dimensions.
class KernelBank {
 public:
  explicit KernelBank(std::vector<Matrix> kernels);

  const std::vector<Matrix>& kernels() const { return kernels_; }
  const Matrix& kernel(std::size_t i) const { return kernels_.at(i); }

  /// Mutable weights of kernel i. Shapes never change after construction.
  std::span<double> weights(std::size_t i) { return kernels_.at(i).values(); }

  std::size_t weight_count() const;

  friend bool operator==(const KernelBank&, const KernelBank&) = default;

 private:
  std::vector<Matrix> kernels_;
};

struct KernelSize {
  int rows = 0;
  int cols = 0;
};

/// (9x15, 9x15, 9x27, 9x27, 9x51, 9x51).
std::vector<KernelSize> default_kernel_sizes();

struct SamplePoint {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const SamplePoint&, const SamplePoint&) = default;
};

/// Regular sampling lattice: rows x cols points, row-major, columns evenly
/// spaced by col_step and wrapping exactly once around the image.
struct GridShape {
  int rows = 0;
  int cols = 0;
  int col_step = 0;
};

/// Coordinates read from every response map. Either one list shared by all
/// six maps or one list per map (all of equal length).
class SamplingMap {
 public:
  SamplingMap(int image_rows, int image_cols, std::vector<SamplePoint> shared);
  SamplingMap(int image_rows, int image_cols, std::vector<std::vector<SamplePoint>> per_map);

  int image_rows() const { return image_rows_; }
  int image_cols() const { return image_cols_; }
  int points_per_map() const { return static_cast<int>(lists_.front().size()); }
  int code_length() const { return kBankSize * points_per_map(); }
  bool is_per_map() const { return lists_.size() > 1; }

  const std::vector<SamplePoint>& points(int map) const {
    return lists_.size() == 1 ? lists_.front() : lists_.at(static_cast<std::size_t>(map));
  }

  /// Lattice structure when the map is shared and grid-shaped.
  const std::optional<GridShape>& grid() const { return grid_; }

 private:
  void validate();

  int image_rows_ = 0;
  int image_cols_ = 0;
  std::vector<std::vector<SamplePoint>> lists_;
  std::optional<GridShape> grid_;
};

/// 8x32 lattice: rows {4, 12, ..., 60}, cols {8, 24, ..., 504}.
SamplingMap default_sampling_map();

/// 256 lines `row col`, or a first line `per-map` followed by 6x256 lines.
/// Blank lines and lines starting with '#' are ignored.
SamplingMap load_sampling_map(const std::filesystem::path& path);
void save_sampling_map(const SamplingMap& map, const std::filesystem::path& path);

using Features = std::vector<double>;

/// Pre-activation responses at the sampled points, map-major.
std::vector<double> sampled_responses(const Matrix& image, const KernelBank& bank,
                                      const SamplingMap& map);

/// Sigmoid of sampled_responses.
Features encode_features(const Matrix& image, const KernelBank& bank, const SamplingMap& map);
Features encode_features(const NormalizedIris& iris, const KernelBank& bank, const SamplingMap& map);

/// bit = 1 iff value > 0.5.
Bits binarize(std::span<const double> features);

/// Mask value at each sampled point of each map.
Bits sample_mask(const BitGrid& mask, const SamplingMap& map);

/// Elementwise AND.
BitGrid combine_masks(const BitGrid& a, const BitGrid& b);

struct IrisCode {
  Bits bits;
  Bits mask_bits;
  friend bool operator==(const IrisCode&, const IrisCode&) = default;
};

IrisCode encode_code(const NormalizedIris& iris, const OcclusionMask& mask, const KernelBank& bank,
                     const SamplingMap& map);

/// Subtracts each kernel's mean from its weights.
KernelBank zero_mean(KernelBank bank);

/// Real part of a 2D Gabor kernel sampled on a grid centered at the origin:
/// exp(-(x'^2 / 2 sx^2 + y'^2 / 2 sy^2)) * cos(2 pi x' / wavelength + phase).
struct GaborParams {
  int rows = 0;
  int cols = 0;
  double wavelength = 0.0;
  double orientation = 0.0;  // radians; 0 is horizontal
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double phase = 0.0;
};

/// Even and odd kernel per scale; wavelengths 8/16/32, sx = cols/6, sy = rows/3.
std::vector<GaborParams> default_gabor_params();

Matrix gabor_kernel(const GaborParams& params);
KernelBank gabor_init(std::span<const GaborParams> params);
KernelBank gabor_init();

/// Weights i.i.d. uniform in [-0.05, 0.05].
KernelBank random_init(std::uint64_t seed, std::span<const KernelSize> sizes);
KernelBank random_init(std::uint64_t seed);

/// Text format: count line, then per kernel `rows cols` and `rows` lines of
/// weights printed with 17 significant digits.
void save_kernels(const KernelBank& bank, const std::filesystem::path& path);
KernelBank load_kernels(const std::filesystem::path& path);

/// kernel_<i>.pgm (min-max scaled; constant kernels render 128) and
/// kernel_<i>.csv (raw weights) for each kernel.
void export_kernel_heatmaps(const KernelBank& bank, const std::filesystem::path& dir);

/// Heatmap pixels for one kernel.
Grid<std::uint8_t> kernel_heatmap(const Matrix& kernel);

/// Binary code file: "IRC1" then the bit plane and the mask plane, each
/// packed MSB-first (192 bytes per plane for 1536 bits).
void write_iris_code(const std::filesystem::path& path, const IrisCode& code);
IrisCode read_iris_code(const std::filesystem::path& path);

}  // namespace irisnet

#endif  // IRISNET_CODER_HPP_
