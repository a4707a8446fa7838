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

#include "irisnet/coder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "irisnet/conv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/rng.hpp"

namespace irisnet {

KernelBank::KernelBank(std::vector<Matrix> kernels) : kernels_(std::move(kernels)) {
  if (kernels_.size() != static_cast<std::size_t>(kBankSize)) {
    throw DataError("kernel bank must hold exactly 6 kernels, got " +
                    std::to_string(kernels_.size()));
  }
  for (const auto& k : kernels_) {
    if (k.rows() <= 0 || k.cols() <= 0 || k.rows() % 2 == 0 || k.cols() % 2 == 0) {
      throw DataError("kernel dimensions must be odd, got " + std::to_string(k.rows()) + "x" +
                      std::to_string(k.cols()));
    }
  }
}

std::size_t KernelBank::weight_count() const {
  std::size_t n = 0;
  for (const auto& k : kernels_) n += k.size();
  return n;
}

std::vector<KernelSize> default_kernel_sizes() {
  return {{9, 15}, {9, 15}, {9, 27}, {9, 27}, {9, 51}, {9, 51}};
}

// --- sampling map ----------------------------------------------------------

SamplingMap::SamplingMap(int image_rows, int image_cols, std::vector<SamplePoint> shared)
    : image_rows_(image_rows), image_cols_(image_cols) {
  lists_.push_back(std::move(shared));
  validate();
}

SamplingMap::SamplingMap(int image_rows, int image_cols,
                         std::vector<std::vector<SamplePoint>> per_map)
    : image_rows_(image_rows), image_cols_(image_cols), lists_(std::move(per_map)) {
  if (lists_.size() != static_cast<std::size_t>(kBankSize)) {
    throw DataError("per-map sampling needs 6 point lists, got " + std::to_string(lists_.size()));
  }
  validate();
}

void SamplingMap::validate() {
  for (const auto& list : lists_) {
    if (list.empty()) throw DataError("sampling map has no points");
    if (list.size() != lists_.front().size()) {
      throw DataError("per-map sampling lists differ in length");
    }
    std::set<SamplePoint> seen;
    for (const auto& p : list) {
      if (p.row < 0 || p.row >= image_rows_ || p.col < 0 || p.col >= image_cols_) {
        throw DataError("sampling point (" + std::to_string(p.row) + "," + std::to_string(p.col) +
                        ") out of range");
      }
      if (!seen.insert(p).second) {
        throw DataError("duplicate sampling point (" + std::to_string(p.row) + "," +
                        std::to_string(p.col) + ")");
      }
    }
  }

  grid_.reset();
  if (lists_.size() != 1) return;
  const auto& pts = lists_.front();
  std::vector<int> rows;
  std::vector<int> cols;
  for (const auto& p : pts) {
    if (std::find(rows.begin(), rows.end(), p.row) == rows.end()) rows.push_back(p.row);
    if (std::find(cols.begin(), cols.end(), p.col) == cols.end()) cols.push_back(p.col);
  }
  if (rows.size() * cols.size() != pts.size()) return;
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto& p = pts[i * cols.size() + j];
      if (p.row != rows[i] || p.col != cols[j]) return;
    }
  }
  const int n_cols = static_cast<int>(cols.size());
  if (image_cols_ % n_cols != 0) return;
  const int step = image_cols_ / n_cols;
  for (int j = 1; j < n_cols; ++j) {
    if (cols[j] - cols[j - 1] != step) return;
  }
  grid_ = GridShape{static_cast<int>(rows.size()), n_cols, step};
}

SamplingMap default_sampling_map() {
  std::vector<SamplePoint> pts;
  pts.reserve(kPointsPerMap);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 32; ++c) pts.push_back({4 + 8 * r, 8 + 16 * c});
  }
  return SamplingMap(kIrisRows, kIrisCols, std::move(pts));
}

// --- encoding ----------------------------------------------------------------

namespace {

void require_matching_dims(const Matrix& image, const SamplingMap& map) {
  if (image.rows() != map.image_rows() || image.cols() != map.image_cols()) {
    throw DataError("image " + std::to_string(image.rows()) + "x" + std::to_string(image.cols()) +
                    " does not match sampling map bounds " + std::to_string(map.image_rows()) +
                    "x" + std::to_string(map.image_cols()));
  }
}

}  // namespace

std::vector<double> sampled_responses(const Matrix& image, const KernelBank& bank,
                                      const SamplingMap& map) {
  require_matching_dims(image, map);
  const int n = map.points_per_map();
  std::vector<double> out(static_cast<std::size_t>(kBankSize * n));
  for (int k = 0; k < kBankSize; ++k) {
    const auto& kernel = bank.kernel(static_cast<std::size_t>(k));
    const auto& pts = map.points(k);
    for (int i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(k * n + i)] = response_at(image, kernel, pts[i].row, pts[i].col);
    }
  }
  return out;
}

Features encode_features(const Matrix& image, const KernelBank& bank, const SamplingMap& map) {
  auto f = sampled_responses(image, bank, map);
  for (double& v : f) v = sigmoid(v);
  return f;
}

Features encode_features(const NormalizedIris& iris, const KernelBank& bank, const SamplingMap& map) {
  return encode_features(iris.pixels(), bank, map);
}

Bits binarize(std::span<const double> features) {
  Bits bits(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) bits[i] = features[i] > 0.5 ? 1 : 0;
  return bits;
}

Bits sample_mask(const BitGrid& mask, const SamplingMap& map) {
  if (mask.rows() != map.image_rows() || mask.cols() != map.image_cols()) {
    throw DataError("mask does not match sampling map bounds");
  }
  const int n = map.points_per_map();
  Bits out(static_cast<std::size_t>(kBankSize * n));
  for (int k = 0; k < kBankSize; ++k) {
    const auto& pts = map.points(k);
    for (int i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(k * n + i)] = mask(pts[i].row, pts[i].col) ? 1 : 0;
    }
  }
  return out;
}

BitGrid combine_masks(const BitGrid& a, const BitGrid& b) {
  if (!a.same_shape(b)) throw DataError("combine_masks: shape mismatch");
  BitGrid out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.values()[i] = (a.values()[i] && b.values()[i]) ? 1 : 0;
  }
  return out;
}

IrisCode encode_code(const NormalizedIris& iris, const OcclusionMask& mask, const KernelBank& bank,
                     const SamplingMap& map) {
  const auto f = encode_features(iris, bank, map);
  return {binarize(f), sample_mask(mask.bits(), map)};
}

// --- kernel construction -------------------------------------------------------

KernelBank zero_mean(KernelBank bank) {
  for (std::size_t k = 0; k < bank.kernels().size(); ++k) {
    auto w = bank.weights(k);
    double sum = 0.0;
    for (double v : w) sum += v;
    const double mean = sum / static_cast<double>(w.size());
    for (double& v : w) v -= mean;
  }
  return bank;
}

std::vector<GaborParams> default_gabor_params() {
  std::vector<GaborParams> params;
  const double wavelengths[] = {8.0, 16.0, 32.0};
  const auto sizes = default_kernel_sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    GaborParams p;
    p.rows = sizes[i].rows;
    p.cols = sizes[i].cols;
    p.wavelength = wavelengths[i / 2];
    p.orientation = 0.0;
    p.sigma_x = p.cols / 6.0;
    p.sigma_y = p.rows / 3.0;
    p.phase = (i % 2 == 0) ? 0.0 : std::numbers::pi / 2.0;
    params.push_back(p);
  }
  return params;
}

Matrix gabor_kernel(const GaborParams& p) {
  if (p.sigma_x <= 0.0 || p.sigma_y <= 0.0 || p.wavelength <= 0.0) {
    throw DataError("gabor parameters must be positive");
  }
  if (p.rows <= 0 || p.cols <= 0 || p.rows % 2 == 0 || p.cols % 2 == 0) {
    throw DataError("gabor kernel dimensions must be odd");
  }
  Matrix k(p.rows, p.cols);
  const int cy = (p.rows - 1) / 2;
  const int cx = (p.cols - 1) / 2;
  const double ct = std::cos(p.orientation);
  const double st = std::sin(p.orientation);
  for (int r = 0; r < p.rows; ++r) {
    for (int c = 0; c < p.cols; ++c) {
      const double x = c - cx;
      const double y = r - cy;
      const double xr = x * ct + y * st;
      const double yr = -x * st + y * ct;
      const double envelope = std::exp(-(xr * xr / (2.0 * p.sigma_x * p.sigma_x) +
                                         yr * yr / (2.0 * p.sigma_y * p.sigma_y)));
      k(r, c) = envelope * std::cos(2.0 * std::numbers::pi * xr / p.wavelength + p.phase);
    }
  }
  return k;
}

KernelBank gabor_init(std::span<const GaborParams> params) {
  std::vector<Matrix> kernels;
  for (const auto& p : params) kernels.push_back(gabor_kernel(p));
  return KernelBank(std::move(kernels));
}

KernelBank gabor_init() {
  const auto params = default_gabor_params();
  return gabor_init(params);
}

KernelBank random_init(std::uint64_t seed, std::span<const KernelSize> sizes) {
  Rng rng(seed, 0x6b65726e656c73ULL);
  std::vector<Matrix> kernels;
  for (const auto& s : sizes) {
    Matrix k(s.rows, s.cols);
    for (double& v : k.values()) v = rng.uniform(-0.05, 0.05);
    kernels.push_back(std::move(k));
  }
  return KernelBank(std::move(kernels));
}

KernelBank random_init(std::uint64_t seed) {
  const auto sizes = default_kernel_sizes();
  return random_init(seed, sizes);
}

}  // namespace irisnet
