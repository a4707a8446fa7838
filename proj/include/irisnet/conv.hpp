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

// Forward signal path of the single convolutional layer: toroidal padding,
// valid cross-correlation and the sigmoid activation.
//
// Convention: out(y, x) = sum_{u,v} padded(y + u, x + v) * kernel(u, v), with
// u outer and v inner. The kernel is not flipped. Every function below that
// produces a response value accumulates in exactly this order, so pointwise
// and whole-map evaluation agree bit for bit.

#ifndef IRISNET_CONV_HPP_
#define IRISNET_CONV_HPP_

#include "irisnet/matrix.hpp"

namespace irisnet {

/// padded(r, c) = image((r - pad_y) mod H, (c - pad_x) mod W).
/// Requires 0 <= pad_y < H and 0 <= pad_x < W.
Matrix wrap_pad(const Matrix& image, int pad_y, int pad_x);

/// Valid cross-correlation; output is (P_h - k_h + 1) x (P_w - k_w + 1).
Matrix convolve_valid(const Matrix& padded, const Matrix& kernel);

/// Pre-activation response map of an odd-sized kernel over a wrap-padded
/// image. Same shape as the image.
Matrix response_map(const Matrix& image, const Matrix& kernel);

/// One entry of response_map(image, kernel), evaluated without materializing
/// the padded image.
double response_at(const Matrix& image, const Matrix& kernel, int y, int x);

/// Value of the wrap-padded image at padded coordinates (r, c) for a kernel
/// of the given size; the derivative of a response w.r.t. kernel(u, v) is
/// padded_value(image, kh, kw, y + u, x + v).
inline double padded_value(const Matrix& image, int kernel_rows, int kernel_cols, int r, int c) {
  const int h = image.rows();
  const int w = image.cols();
  int rr = (r - (kernel_rows - 1) / 2) % h;
  int cc = (c - (kernel_cols - 1) / 2) % w;
  if (rr < 0) rr += h;
  if (cc < 0) cc += w;
  return image(rr, cc);
}

double sigmoid(double x);
Matrix sigmoid(const Matrix& x);

}  // namespace irisnet

#endif  // IRISNET_CONV_HPP_
