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

#include "irisnet/conv.hpp"

#include <cmath>
#include <string>

#include "irisnet/error.hpp"

namespace irisnet {

namespace {

void require_odd_kernel(const Matrix& kernel) {
  if (kernel.rows() <= 0 || kernel.cols() <= 0 || kernel.rows() % 2 == 0 || kernel.cols() % 2 == 0) {
    throw DataError("kernel dimensions must be odd and positive, got " +
                    std::to_string(kernel.rows()) + "x" + std::to_string(kernel.cols()));
  }
}

}  // namespace

Matrix wrap_pad(const Matrix& image, int pad_y, int pad_x) {
  const int h = image.rows();
  const int w = image.cols();
  if (pad_y < 0 || pad_x < 0 || pad_y >= h || pad_x >= w) {
    throw DataError("wrap_pad: pad (" + std::to_string(pad_y) + "," + std::to_string(pad_x) +
                    ") exceeds image " + std::to_string(h) + "x" + std::to_string(w));
  }
  Matrix out(h + 2 * pad_y, w + 2 * pad_x);
  for (int r = 0; r < out.rows(); ++r) {
    const auto src = image.row((r - pad_y + h) % h);
    auto dst = out.row(r);
    for (int c = 0; c < out.cols(); ++c) dst[c] = src[(c - pad_x + w) % w];
  }
  return out;
}

Matrix convolve_valid(const Matrix& padded, const Matrix& kernel) {
  const int kh = kernel.rows();
  const int kw = kernel.cols();
  const int oh = padded.rows() - kh + 1;
  const int ow = padded.cols() - kw + 1;
  if (kh <= 0 || kw <= 0 || oh <= 0 || ow <= 0) {
    throw DataError("convolve_valid: kernel " + std::to_string(kh) + "x" + std::to_string(kw) +
                    " does not fit input " + std::to_string(padded.rows()) + "x" +
                    std::to_string(padded.cols()));
  }
  Matrix out(oh, ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int u = 0; u < kh; ++u) {
        const auto in = padded.row(y + u);
        const auto k = kernel.row(u);
        for (int v = 0; v < kw; ++v) acc += in[x + v] * k[v];
      }
      out(y, x) = acc;
    }
  }
  return out;
}

Matrix response_map(const Matrix& image, const Matrix& kernel) {
  require_odd_kernel(kernel);
  return convolve_valid(wrap_pad(image, (kernel.rows() - 1) / 2, (kernel.cols() - 1) / 2), kernel);
}

double response_at(const Matrix& image, const Matrix& kernel, int y, int x) {
  const int kh = kernel.rows();
  const int kw = kernel.cols();
  const int h = image.rows();
  const int w = image.cols();
  const int pad_y = (kh - 1) / 2;
  const int pad_x = (kw - 1) / 2;
  double acc = 0.0;
  for (int u = 0; u < kh; ++u) {
    int r = (y + u - pad_y) % h;
    if (r < 0) r += h;
    const auto in = image.row(r);
    const auto k = kernel.row(u);
    int c = (x - pad_x) % w;
    if (c < 0) c += w;
    for (int v = 0; v < kw; ++v) {
      acc += in[c] * k[v];
      if (++c == w) c = 0;
    }
  }
  return acc;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix sigmoid(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out.values()[i] = sigmoid(x.values()[i]);
  return out;
}

}  // namespace irisnet
