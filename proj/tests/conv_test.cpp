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

#include <gtest/gtest.h>

#include <cmath>

#include "irisnet/conv.hpp"
#include "irisnet/error.hpp"
#include "support.hpp"

namespace irisnet {
namespace {

using testing::random_matrix;

// Quadruple loop straight from the definition: toroidal indexing of the
// unpadded image, no padded buffer.
Matrix naive_response(const Matrix& img, const Matrix& k) {
  const int h = img.rows();
  const int w = img.cols();
  const int py = (k.rows() - 1) / 2;
  const int px = (k.cols() - 1) / 2;
  Matrix out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int u = 0; u < k.rows(); ++u) {
        for (int v = 0; v < k.cols(); ++v) {
          const int r = ((y + u - py) % h + h) % h;
          const int c = ((x + v - px) % w + w) % w;
          acc += img(r, c) * k(u, v);
        }
      }
      out(y, x) = acc;
    }
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

TEST(WrapPad, ShapeForEveryScale) {
  const Matrix img = random_matrix(64, 512, 1);
  EXPECT_EQ(wrap_pad(img, 4, 7).rows(), 72);
  EXPECT_EQ(wrap_pad(img, 4, 7).cols(), 526);
  EXPECT_EQ(wrap_pad(img, 4, 13).cols(), 538);
  EXPECT_EQ(wrap_pad(img, 4, 25).cols(), 562);
}

TEST(WrapPad, ZeroPadIsIdentity) {
  const Matrix img = random_matrix(8, 16, 2);
  EXPECT_EQ(wrap_pad(img, 0, 0), img);
}

TEST(WrapPad, ToroidalIndexFormula) {
  const Matrix img = random_matrix(64, 512, 3);
  const Matrix p = wrap_pad(img, 4, 7);
  EXPECT_EQ(p(0, 0), img(60, 505));
  for (int r = 0; r < p.rows(); r += 5) {
    for (int c = 0; c < p.cols(); c += 11) {
      EXPECT_EQ(p(r, c), img((r - 4 + 64) % 64, (c - 7 + 512) % 512));
    }
  }
}

TEST(WrapPad, RejectsOversizedPad) {
  const Matrix img = random_matrix(8, 16, 4);
  EXPECT_THROW(wrap_pad(img, 8, 0), DataError);
  EXPECT_THROW(wrap_pad(img, 0, 16), DataError);
  EXPECT_THROW(wrap_pad(img, -1, 0), DataError);
}

TEST(Convolve, DeltaKernelIsIdentity) {
  const Matrix img = random_matrix(64, 512, 5);
  for (auto [h, w] : {std::pair{9, 15}, std::pair{9, 27}, std::pair{9, 51}}) {
    Matrix k(h, w, 0.0);
    k(h / 2, w / 2) = 1.0;
    EXPECT_EQ(response_map(img, k), img);
  }
}

TEST(Convolve, ConstantImageZeroSumKernelGivesZero) {
  const Matrix img(64, 512, 0.37);
  Matrix k = random_matrix(9, 15, 6, -1, 1);
  double mean = 0.0;
  for (double v : k.values()) mean += v;
  mean /= static_cast<double>(k.size());
  for (double& v : k.values()) v -= mean;
  const Matrix r = response_map(img, k);
  for (double v : r.values()) EXPECT_NEAR(v, 0.0, 1e-13);
}

TEST(Convolve, MatchesNaiveLoopOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix img = random_matrix(8, 16, 100 + seed);
    const Matrix k = random_matrix(3, 5, 200 + seed, -1, 1);
    EXPECT_LE(max_abs_diff(response_map(img, k), naive_response(img, k)), 1e-12);
  }
}

TEST(Convolve, FullSizeMatchesOracleAndShape) {
  const Matrix img = random_matrix(64, 512, 7);
  for (int w : {15, 27, 51}) {
    const Matrix k = random_matrix(9, w, 8 + w, -0.05, 0.05);
    const Matrix r = response_map(img, k);
    EXPECT_EQ(r.rows(), 64);
    EXPECT_EQ(r.cols(), 512);
    EXPECT_LE(max_abs_diff(r, naive_response(img, k)), 1e-12);
  }
}

TEST(Convolve, CrossCorrelationNoFlip) {
  // An off-center single weight picks the neighbour in the same direction.
  const Matrix img = random_matrix(8, 16, 9);
  Matrix k(3, 5, 0.0);
  k(0, 4) = 1.0;  // (-1, +2) relative to center
  const Matrix r = response_map(img, k);
  EXPECT_EQ(r(3, 3), img(2, 5));
}

TEST(Convolve, RejectsWrongPaddedShape) {
  EXPECT_THROW(convolve_valid(Matrix(4, 4), Matrix(3, 6)), DataError);
  EXPECT_THROW(convolve_valid(Matrix(2, 2), Matrix(3, 3)), DataError);
}

TEST(Convolve, ResponseAtAgreesBitExactly) {
  const Matrix img = random_matrix(64, 512, 10);
  const Matrix k = random_matrix(9, 27, 11, -1, 1);
  const Matrix r = response_map(img, k);
  for (int y = 0; y < 64; y += 7) {
    for (int x = 0; x < 512; x += 13) EXPECT_EQ(response_at(img, k, y, x), r(y, x));
  }
  EXPECT_EQ(response_at(img, k, 0, 0), r(0, 0));
  EXPECT_EQ(response_at(img, k, 63, 511), r(63, 511));
}

TEST(Convolve, ColumnShiftEquivariance) {
  const Matrix img = random_matrix(64, 512, 12);
  for (int w : {15, 27, 51}) {
    const Matrix k = random_matrix(9, w, 13 + w, -1, 1);
    const Matrix base = response_map(img, k);
    for (int shift : {1, 16, 255, 511}) {
      EXPECT_LE(max_abs_diff(response_map(shift_cols(img, shift), k), shift_cols(base, shift)), 1e-10);
    }
  }
}

TEST(Convolve, Linearity) {
  const Matrix a = random_matrix(16, 32, 14);
  const Matrix b = random_matrix(16, 32, 15);
  const Matrix k = random_matrix(9, 15, 16, -1, 1);
  const double alpha = 0.7;
  const double beta = -1.9;
  Matrix mix(16, 32);
  for (std::size_t i = 0; i < mix.size(); ++i) mix.values()[i] = alpha * a.values()[i] + beta * b.values()[i];
  const Matrix ra = response_map(a, k);
  const Matrix rb = response_map(b, k);
  Matrix expected(16, 32);
  for (std::size_t i = 0; i < mix.size(); ++i) expected.values()[i] = alpha * ra.values()[i] + beta * rb.values()[i];
  EXPECT_LE(max_abs_diff(response_map(mix, k), expected), 1e-10);
}

TEST(Sigmoid, AnchorsAndSymmetry) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(1.0), 0.7310585786, 1e-10);
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-50, 50);
    EXPECT_NEAR(sigmoid(x) + sigmoid(-x), 1.0, 1e-15);
  }
}

TEST(Sigmoid, SaturatesWithoutNaN) {
  for (double x : {-1e308, -800.0, 800.0, 1e308}) {
    const double s = sigmoid(x);
    EXPECT_FALSE(std::isnan(s));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  const Matrix m = sigmoid(Matrix(2, 2, 0.0));
  for (double v : m.values()) EXPECT_EQ(v, 0.5);
}

}  // namespace
}  // namespace irisnet
