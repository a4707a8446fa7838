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

#include "irisnet/error.hpp"
#include "irisnet/iris_data.hpp"

namespace irisnet {

namespace {

// Mean-removed copy and its sum of squares.
struct Centered {
  Matrix values;
  double sum_squares = 0.0;
};

Centered center(const Matrix& m) {
  // A constant image has zero variance exactly; rounding in the mean would
  // otherwise leave a tiny spurious one.
  const auto& v = m.values();
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
    return {Matrix(m.rows(), m.cols(), 0.0), 0.0};
  }
  double sum = 0.0;
  for (double v : m.values()) sum += v;
  const double mean = m.empty() ? 0.0 : sum / static_cast<double>(m.size());
  Centered c{Matrix(m.rows(), m.cols()), 0.0};
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double d = m.values()[i] - mean;
    c.values.values()[i] = d;
    c.sum_squares += d * d;
  }
  return c;
}

double correlation(double cross, double ss_a, double ss_b) {
  if (ss_a <= 0.0 || ss_b <= 0.0) return 0.0;
  return std::clamp(cross / std::sqrt(ss_a * ss_b), -1.0, 1.0);
}

}  // namespace

double pearson_cc(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw DataError("pearson_cc: shape mismatch");
  const Centered ca = center(a);
  const Centered cb = center(b);
  double cross = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cross += ca.values.values()[i] * cb.values.values()[i];
  return correlation(cross, ca.sum_squares, cb.sum_squares);
}

AlignedClass align_class(std::span<const Matrix> images, std::span<const BitGrid> masks) {
  if (images.empty()) throw DataError("align_class: empty class");
  if (masks.size() != images.size()) throw DataError("align_class: image/mask count mismatch");
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i].same_shape(images[0]) || !masks[i].same_shape(images[0])) {
      throw DataError("align_class: inconsistent shapes within class");
    }
  }

  const std::size_t n = images.size();
  std::vector<Centered> centered;
  centered.reserve(n);
  for (const auto& img : images) centered.push_back(center(img));

  // Reference: highest mean PCC against the other images of the class.
  std::size_t reference = 0;
  if (n > 1) {
    std::vector<double> total(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double cross = 0.0;
        const auto& a = centered[i].values.values();
        const auto& b = centered[j].values.values();
        for (std::size_t p = 0; p < a.size(); ++p) cross += a[p] * b[p];
        const double r = correlation(cross, centered[i].sum_squares, centered[j].sum_squares);
        total[i] += r;
        total[j] += r;
      }
    }
    for (std::size_t i = 1; i < n; ++i) {
      if (total[i] > total[reference]) reference = i;
    }
  }

  AlignedClass out;
  out.alignment.reference_index = reference;
  out.alignment.shifts.assign(n, 0);
  out.images.assign(images.begin(), images.end());
  out.masks.assign(masks.begin(), masks.end());

  const Matrix& ref = centered[reference].values;
  const int rows = ref.rows();
  const int cols = ref.cols();
  for (std::size_t i = 0; i < n; ++i) {
    if (i == reference) continue;
    const Matrix& img = centered[i].values;
    // Shifting preserves mean and variance, so PCC over shifts is the
    // circular cross-correlation scaled by a constant.
    int best_shift = 0;
    double best = -2.0;
    for (int k = 0; k < cols; ++k) {
      double cross = 0.0;
      for (int r = 0; r < rows; ++r) {
        const auto ref_row = ref.row(r);
        const auto img_row = img.row(r);
        for (int c = 0; c < cols; ++c) {
          int src = c - k;
          if (src < 0) src += cols;
          cross += ref_row[c] * img_row[src];
        }
      }
      const double pcc = correlation(cross, centered[reference].sum_squares, centered[i].sum_squares);
      if (pcc > best) {
        best = pcc;
        best_shift = k;
      }
    }
    out.alignment.shifts[i] = best_shift;
    if (best_shift != 0) {
      out.images[i] = shift_cols(images[i], best_shift);
      out.masks[i] = shift_cols(masks[i], best_shift);
    }
  }
  return out;
}

}  // namespace irisnet
