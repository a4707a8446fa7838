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
#include <numbers>

#include "irisnet/coder.hpp"
#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/pgm.hpp"
#include "support.hpp"

namespace irisnet {
namespace {

using testing::random_matrix;
using testing::TempDir;

KernelBank random_bank(std::uint64_t seed, double scale = 1.0) {
  std::vector<Matrix> ks;
  const auto sizes = default_kernel_sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    ks.push_back(random_matrix(sizes[i].rows, sizes[i].cols, seed * 10 + i, -scale, scale));
  }
  return KernelBank(std::move(ks));
}

double kernel_sum(const Matrix& k) {
  double s = 0.0;
  for (double v : k.values()) s += v;
  return s;
}

// Independent pipeline: explicit padded buffer, loop convolution, sigmoid,
// then indexing; map-major concatenation.
Features naive_features(const Matrix& img, const KernelBank& bank, const SamplingMap& map) {
  Features out;
  for (std::size_t k = 0; k < bank.kernels().size(); ++k) {
    const Matrix& w = bank.kernel(k);
    const int py = w.rows() / 2;
    const int px = w.cols() / 2;
    Matrix padded(img.rows() + 2 * py, img.cols() + 2 * px);
    for (int r = 0; r < padded.rows(); ++r) {
      for (int c = 0; c < padded.cols(); ++c) {
        padded(r, c) = img((r - py + img.rows()) % img.rows(), (c - px + img.cols()) % img.cols());
      }
    }
    for (const auto& p : map.points(static_cast<int>(k))) {
      double acc = 0.0;
      for (int u = 0; u < w.rows(); ++u) {
        for (int v = 0; v < w.cols(); ++v) acc += padded(p.row + u, p.col + v) * w(u, v);
      }
      out.push_back(1.0 / (1.0 + std::exp(-acc)));
    }
  }
  return out;
}

// --- bank ----------------------------------------------------------------------------

TEST(KernelBank, ValidatesCountAndOddShapes) {
  EXPECT_THROW(KernelBank(std::vector<Matrix>(5, Matrix(3, 3))), DataError);
  std::vector<Matrix> even(6, Matrix(3, 3));
  even[2] = Matrix(8, 15);
  EXPECT_THROW(KernelBank{even}, DataError);
  even[2] = Matrix(9, 14);
  EXPECT_THROW(KernelBank{even}, DataError);
  const KernelBank ok(std::vector<Matrix>(6, Matrix(3, 5)));
  EXPECT_EQ(ok.weight_count(), 90u);
}

TEST(KernelBank, DefaultSizes) {
  const auto s = default_kernel_sizes();
  ASSERT_EQ(s.size(), 6u);
  const int cols[] = {15, 15, 27, 27, 51, 51};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(s[i].rows, 9);
    EXPECT_EQ(s[i].cols, cols[i]);
  }
}

TEST(ZeroMean, AllOnesBecomesZero) {
  const KernelBank z = zero_mean(KernelBank(std::vector<Matrix>(6, Matrix(3, 3, 1.0))));
  for (const auto& k : z.kernels()) {
    for (double v : k.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(ZeroMean, SumBelowToleranceAndIdempotent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const KernelBank once = zero_mean(random_bank(seed));
    for (const auto& k : once.kernels()) EXPECT_LE(std::abs(kernel_sum(k)), 1e-12);
    const KernelBank twice = zero_mean(once);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < once.kernel(i).size(); ++j) {
        EXPECT_NEAR(twice.kernel(i).values()[j], once.kernel(i).values()[j], 1e-15);
      }
    }
  }
}

TEST(GaborInit, SymmetryAndCenter) {
  const auto params = default_gabor_params();
  ASSERT_EQ(params.size(), 6u);
  const KernelBank bank = gabor_init();
  for (std::size_t i = 0; i < 6; ++i) {
    const Matrix& k = bank.kernel(i);
    const bool even = i % 2 == 0;
    for (int r = 0; r < k.rows(); ++r) {
      for (int c = 0; c < k.cols(); ++c) {
        const double mirror = k(r, k.cols() - 1 - c);
        if (even) EXPECT_NEAR(k(r, c), mirror, 1e-15);
        else EXPECT_NEAR(k(r, c), -mirror, 1e-15);
      }
    }
    if (even) EXPECT_EQ(k(k.rows() / 2, k.cols() / 2), 1.0);
    else EXPECT_LE(std::abs(kernel_sum(k)), 1e-12);
  }
  EXPECT_EQ(bank.kernel(0).rows(), 9);
  EXPECT_EQ(bank.kernel(0).cols(), 15);
}

TEST(GaborInit, DefaultParameters) {
  const auto p = default_gabor_params();
  const double lambdas[] = {8, 8, 16, 16, 32, 32};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(p[i].wavelength, lambdas[i]);
    EXPECT_EQ(p[i].sigma_x, p[i].cols / 6.0);
    EXPECT_EQ(p[i].sigma_y, p[i].rows / 3.0);
    EXPECT_EQ(p[i].orientation, 0.0);
    EXPECT_EQ(p[i].phase, i % 2 == 0 ? 0.0 : std::numbers::pi / 2);
  }
}

TEST(GaborInit, RejectsNonPositiveParameters) {
  auto p = default_gabor_params()[0];
  p.sigma_x = 0.0;
  EXPECT_THROW(gabor_kernel(p), DataError);
  p = default_gabor_params()[0];
  p.wavelength = -1.0;
  EXPECT_THROW(gabor_kernel(p), DataError);
}

TEST(RandomInit, DeterministicRangeAndSeedSensitive) {
  const KernelBank a = random_init(1);
  EXPECT_EQ(a, random_init(1));
  EXPECT_NE(a, random_init(2));
  for (const auto& k : a.kernels()) {
    for (double v : k.values()) {
      EXPECT_GE(v, -0.05);
      EXPECT_LE(v, 0.05);
    }
  }
  EXPECT_EQ(a.kernel(4).cols(), 51);
}

// --- kernel files --------------------------------------------------------------------

TEST(KernelFile, RoundTripIsBitIdentical) {
  TempDir dir;
  const KernelBank b = random_bank(3, 1e3);
  save_kernels(b, dir / "k.txt");
  EXPECT_EQ(load_kernels(dir / "k.txt"), b);
}

TEST(KernelFile, RejectsMalformedFiles) {
  TempDir dir;
  save_kernels(random_bank(4), dir / "good.txt");
  std::string text = testing::slurp(dir / "good.txt");

  testing::write_text(dir / "five.txt", "5" + text.substr(1));
  EXPECT_THROW(load_kernels(dir / "five.txt"), DataError);

  std::string even = "6\n8 3\n";
  for (int r = 0; r < 8; ++r) even += "0 0 0\n";
  testing::write_text(dir / "even.txt", even);
  EXPECT_THROW(load_kernels(dir / "even.txt"), DataError);

  testing::write_text(dir / "trailing.txt", text + "1.0\n");
  EXPECT_THROW(load_kernels(dir / "trailing.txt"), DataError);
  testing::write_text(dir / "short.txt", text.substr(0, text.size() / 2));
  EXPECT_THROW(load_kernels(dir / "short.txt"), DataError);
  testing::write_text(dir / "junk.txt", "6\n3 3\n1 2 x\n");
  EXPECT_THROW(load_kernels(dir / "junk.txt"), DataError);
  EXPECT_THROW(load_kernels(dir / "absent.txt"), DataError);
}

TEST(Heatmaps, FilesRangeAndRoundTrip) {
  TempDir dir;
  std::vector<Matrix> ks;
  for (int i = 0; i < 6; ++i) ks.push_back(random_matrix(3, 5, 50 + i, -2, 2));
  ks[3] = Matrix(3, 5, 0.25);
  const KernelBank bank(ks);
  export_kernel_heatmaps(bank, dir.path());
  for (int i = 0; i < 6; ++i) {
    const auto stem = "kernel_" + std::to_string(i);
    ASSERT_TRUE(std::filesystem::exists(dir / (stem + ".pgm")));
    const auto img = read_pgm(dir / (stem + ".pgm"));
    const auto rows = csv::read(dir / (stem + ".csv"), "");
    ASSERT_EQ(rows.size(), 3u);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 5; ++c) EXPECT_EQ(csv::parse_double(rows[r][c], "w"), ks[i](r, c));
    }
    if (i == 3) {
      for (auto v : img.values()) EXPECT_EQ(v, 128);
    } else {
      EXPECT_EQ(*std::min_element(img.values().begin(), img.values().end()), 0);
      EXPECT_EQ(*std::max_element(img.values().begin(), img.values().end()), 255);
    }
  }
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
  EXPECT_EQ(files, 12u);
}

// --- sampling map --------------------------------------------------------------------

TEST(SamplingMap, DefaultGrid) {
  const SamplingMap m = default_sampling_map();
  const auto& pts = m.points(0);
  ASSERT_EQ(pts.size(), 256u);
  EXPECT_EQ(m.code_length(), 1536);
  EXPECT_EQ(*std::min_element(pts.begin(), pts.end()), (SamplePoint{4, 8}));
  EXPECT_EQ(*std::max_element(pts.begin(), pts.end()), (SamplePoint{60, 504}));
  ASSERT_TRUE(m.grid().has_value());
  EXPECT_EQ(m.grid()->rows, 8);
  EXPECT_EQ(m.grid()->cols, 32);
  EXPECT_EQ(m.grid()->col_step, 16);
  for (int k = 1; k < 6; ++k) EXPECT_EQ(&m.points(k), &m.points(0));
}

TEST(SamplingMap, RejectsBadPoints) {
  EXPECT_THROW(SamplingMap(64, 512, std::vector<SamplePoint>{{1, 1}, {1, 1}}), DataError);
  EXPECT_THROW(SamplingMap(64, 512, std::vector<SamplePoint>{{64, 1}}), DataError);
  EXPECT_THROW(SamplingMap(64, 512, std::vector<SamplePoint>{{0, -1}}), DataError);
  EXPECT_THROW(SamplingMap(64, 512, std::vector<SamplePoint>{}), DataError);
}

TEST(SamplingMap, NonGridListsHaveNoLattice) {
  std::vector<SamplePoint> pts = default_sampling_map().points(0);
  std::swap(pts[0], pts[1]);
  EXPECT_FALSE(SamplingMap(64, 512, pts).grid().has_value());
  pts = default_sampling_map().points(0);
  pts[5].col += 1;
  EXPECT_FALSE(SamplingMap(64, 512, pts).grid().has_value());
}

TEST(SamplingMap, FileRoundTripAndCountCheck) {
  TempDir dir;
  const SamplingMap m = default_sampling_map();
  save_sampling_map(m, dir / "map.txt");
  const SamplingMap back = load_sampling_map(dir / "map.txt");
  EXPECT_EQ(back.points(0), m.points(0));
  EXPECT_TRUE(back.grid().has_value());

  std::string text;
  for (int i = 0; i < 255; ++i) text += std::to_string(i / 32) + " " + std::to_string(i % 32) + "\n";
  testing::write_text(dir / "short.txt", text);
  EXPECT_THROW(load_sampling_map(dir / "short.txt"), DataError);
  testing::write_text(dir / "full.txt", "# comment line\n" + text + "63 511\n");
  EXPECT_EQ(load_sampling_map(dir / "full.txt").points(0).size(), 256u);
  testing::write_text(dir / "range.txt", text + "64 0\n");
  EXPECT_THROW(load_sampling_map(dir / "range.txt"), DataError);
}

TEST(SamplingMap, PerMapFile) {
  TempDir dir;
  std::string text = "per-map\n";
  for (int k = 0; k < 6; ++k) {
    for (int i = 0; i < 256; ++i) text += std::to_string((i + k) % 64) + " " + std::to_string(2 * i) + "\n";
  }
  testing::write_text(dir / "pm.txt", text);
  const SamplingMap m = load_sampling_map(dir / "pm.txt");
  EXPECT_TRUE(m.is_per_map());
  EXPECT_FALSE(m.grid().has_value());
  EXPECT_EQ(m.points(2)[0], (SamplePoint{2, 0}));
  save_sampling_map(m, dir / "again.txt");
  EXPECT_EQ(load_sampling_map(dir / "again.txt").points(5), m.points(5));
  const Matrix img = random_matrix(64, 512, 9);
  const KernelBank bank = random_bank(9, 0.05);
  const Features f = encode_features(img, bank, m);
  const Features oracle = naive_features(img, bank, m);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(f[i], oracle[i], 1e-12);
}

// --- encoding ------------------------------------------------------------------------

TEST(Encode, LengthAndRange) {
  const Features f = encode_features(random_matrix(64, 512, 1), random_init(1), default_sampling_map());
  ASSERT_EQ(f.size(), 1536u);
  for (double v : f) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Encode, ConstantImageZeroMeanKernelsGiveHalf) {
  const Features f = encode_features(Matrix(64, 512, 0.6), zero_mean(random_bank(2)), default_sampling_map());
  for (double v : f) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(Encode, MatchesComposedNaiveOracle) {
  const SamplingMap map = default_sampling_map();
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Matrix img = random_matrix(64, 512, 60 + seed);
    const KernelBank bank = random_bank(70 + seed, 0.05);
    const Features f = encode_features(img, bank, map);
    const Features oracle = naive_features(img, bank, map);
    ASSERT_EQ(f.size(), oracle.size());
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(f[i], oracle[i], 1e-12);
  }
}

TEST(Encode, RejectsWrongImageShape) {
  EXPECT_THROW(encode_features(Matrix(32, 512), random_init(1), default_sampling_map()), DataError);
}

TEST(Encode, KernelOrderPermutesBlocks) {
  const Matrix img = random_matrix(64, 512, 11);
  const KernelBank bank = random_bank(12, 0.05);
  const std::size_t perm[] = {5, 4, 3, 2, 1, 0};
  std::vector<Matrix> ks;
  for (auto p : perm) ks.push_back(bank.kernel(p));
  const SamplingMap map = default_sampling_map();
  const Features a = encode_features(img, bank, map);
  const Features b = encode_features(img, KernelBank(ks), map);
  for (std::size_t k = 0; k < 6; ++k) {
    for (std::size_t i = 0; i < 256; ++i) EXPECT_EQ(b[k * 256 + i], a[perm[k] * 256 + i]);
  }
}

TEST(Encode, LatticeColumnShiftProperty) {
  // Shifting the image by one lattice step moves every sampled value one
  // lattice column to the right.
  const SamplingMap map = default_sampling_map();
  const Matrix img = random_matrix(64, 512, 13);
  const KernelBank bank = random_bank(14, 0.05);
  const Features base = encode_features(img, bank, map);
  for (int steps : {1, 3, 31}) {
    const Features shifted = encode_features(shift_cols(img, 16 * steps), bank, map);
    for (int k = 0; k < 6; ++k) {
      for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 32; ++c) {
          const std::size_t dst = static_cast<std::size_t>(k * 256 + r * 32 + (c + steps) % 32);
          EXPECT_NEAR(shifted[dst], base[static_cast<std::size_t>(k * 256 + r * 32 + c)], 1e-12);
        }
      }
    }
  }
}

TEST(Binarize, ThresholdConvention) {
  EXPECT_EQ(binarize(std::vector<double>{0.5, 0.50001, 0.49999, 0.9, 0.1}), (Bits{0, 1, 0, 1, 0}));
}

TEST(Binarize, EqualsThresholdingResponsesAtZero) {
  const Matrix img = random_matrix(64, 512, 15);
  const KernelBank bank = zero_mean(random_bank(16, 0.05));
  const SamplingMap map = default_sampling_map();
  const Bits bits = binarize(encode_features(img, bank, map));
  const auto responses = sampled_responses(img, bank, map);
  ASSERT_EQ(responses.size(), bits.size());
  std::size_t ones = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    EXPECT_EQ(bits[i], responses[i] > 0.0 ? 1 : 0);
    ones += bits[i];
  }
  EXPECT_GT(ones, 300u);
  EXPECT_LT(ones, 1236u);
}

TEST(SampleMask, OnesZerosAndReplication) {
  const SamplingMap map = default_sampling_map();
  const Bits ones = sample_mask(BitGrid(64, 512, 1), map);
  ASSERT_EQ(ones.size(), 1536u);
  for (auto b : ones) EXPECT_EQ(b, 1);
  for (auto b : sample_mask(BitGrid(64, 512, 0), map)) EXPECT_EQ(b, 0);

  BitGrid m(64, 512, 1);
  const std::size_t p = 77;
  const SamplePoint pt = map.points(0)[p];
  m(pt.row, pt.col) = 0;
  const Bits s = sample_mask(m, map);
  for (std::size_t i = 0; i < 1536; ++i) EXPECT_EQ(s[i], i % 256 == p ? 0 : 1);
}

TEST(CombineMasks, AndAlgebra) {
  const BitGrid a = testing::random_mask(64, 512, 1, 0.5);
  const BitGrid b = testing::random_mask(64, 512, 2, 0.5);
  EXPECT_EQ(combine_masks(a, BitGrid(64, 512, 1)), a);
  EXPECT_EQ(combine_masks(a, BitGrid(64, 512, 0)), BitGrid(64, 512, 0));
  EXPECT_EQ(combine_masks(a, b), combine_masks(b, a));
  EXPECT_THROW(combine_masks(a, BitGrid(64, 511, 1)), DataError);
}

TEST(IrisCodeFile, SizeAndRoundTrip) {
  TempDir dir;
  Rng rng(3);
  const IrisCode code{testing::random_bits(1536, rng), testing::random_bits(1536, rng)};
  write_iris_code(dir / "a/b.irc", code);
  EXPECT_EQ(std::filesystem::file_size(dir / "a/b.irc"), 4u + 2u * 192u);
  EXPECT_EQ(testing::slurp(dir / "a/b.irc").substr(0, 4), "IRC1");
  EXPECT_EQ(read_iris_code(dir / "a/b.irc"), code);
}

TEST(IrisCodeFile, MsbFirstPacking) {
  TempDir dir;
  IrisCode code{Bits(1536, 0), Bits(1536, 0)};
  code.bits[0] = 1;
  code.mask_bits[9] = 1;
  write_iris_code(dir / "c.irc", code);
  const std::string raw = testing::slurp(dir / "c.irc");
  EXPECT_EQ(static_cast<unsigned char>(raw[4]), 0x80);
  EXPECT_EQ(static_cast<unsigned char>(raw[4 + 192 + 1]), 0x40);
}

TEST(IrisCodeFile, RejectsCorruptFiles) {
  TempDir dir;
  testing::write_text(dir / "bad.irc", "XXXX" + std::string(384, '\0'));
  EXPECT_THROW(read_iris_code(dir / "bad.irc"), DataError);
  testing::write_text(dir / "short.irc", "IRC1" + std::string(100, '\0'));
  EXPECT_THROW(read_iris_code(dir / "short.irc"), DataError);
}

TEST(EncodeCode, BitsAndMaskBits) {
  const Matrix px = random_matrix(64, 512, 17);
  BitGrid mask(64, 512, 1);
  for (int c = 0; c < 512; ++c) mask(4, c) = 0;  // first lattice row
  const KernelBank bank = random_init(5);
  const SamplingMap map = default_sampling_map();
  const IrisCode code = encode_code(NormalizedIris(px), OcclusionMask(mask), bank, map);
  EXPECT_EQ(code.bits, binarize(encode_features(px, bank, map)));
  for (std::size_t i = 0; i < 1536; ++i) EXPECT_EQ(code.mask_bits[i], (i % 256) < 32 ? 0 : 1);
}

}  // namespace
}  // namespace irisnet
