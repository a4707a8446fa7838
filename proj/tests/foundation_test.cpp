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

#include <atomic>
#include <numeric>
#include <set>
#include <stdexcept>

#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/matrix.hpp"
#include "irisnet/parallel.hpp"
#include "irisnet/pgm.hpp"
#include "irisnet/rng.hpp"
#include "support.hpp"

namespace irisnet {
namespace {

using testing::TempDir;

TEST(Grid, ShiftColsMovesContentRightAndWraps) {
  Grid<int> g(2, 4);
  std::iota(g.values().begin(), g.values().end(), 0);
  const auto s = shift_cols(g, 1);
  EXPECT_EQ(s(0, 0), 3);
  EXPECT_EQ(s(0, 1), 0);
  EXPECT_EQ(s(1, 3), 6);
  EXPECT_EQ(shift_cols(g, 4), g);
  EXPECT_EQ(shift_cols(g, -1), shift_cols(g, 3));
}

TEST(Grid, ShiftPreservesRowMultiset) {
  const Matrix m = testing::random_matrix(5, 17, 3);
  for (int k : {1, 5, 16, -7}) {
    const Matrix s = shift_cols(m, k);
    for (int r = 0; r < m.rows(); ++r) {
      std::multiset<double> a(m.row(r).begin(), m.row(r).end());
      std::multiset<double> b(s.row(r).begin(), s.row(r).end());
      EXPECT_EQ(a, b);
    }
  }
}

TEST(Rng, DeterministicAndStreamSeparated) {
  Rng a(42, 1);
  Rng b(42, 1);
  Rng c(42, 2);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, RangesHold) {
  Rng rng(7);
  std::vector<int> hist(6, 0);
  for (int i = 0; i < 60000; ++i) {
    const auto k = rng.below(6);
    ASSERT_LT(k, 6u);
    ++hist[k];
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Rng, NormalMoments) {
  Rng rng(9);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Csv, DoubleRoundTripIsExact) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-20, 20));
    EXPECT_EQ(csv::parse_double(csv::format_double(v), "v"), v);
  }
}

TEST(Csv, StrictParsing) {
  EXPECT_THROW(csv::parse_double("1.5x", "v"), DataError);
  EXPECT_THROW(csv::parse_double("", "v"), DataError);
  EXPECT_THROW(csv::parse_int("3.0", "v"), DataError);
  EXPECT_EQ(csv::parse_int("-12", "v"), -12);
}

TEST(Csv, ReadChecksHeaderAndSkipsBlankLines) {
  TempDir dir;
  testing::write_text(dir / "a.csv", "\xEF\xBB\xBFx,y\n1,2\n\n3,4\n");
  const auto rows = csv::read(dir / "a.csv", "x,y");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "3");
  EXPECT_THROW(csv::read(dir / "a.csv", "x,z"), DataError);
  EXPECT_THROW(csv::read(dir / "missing.csv", "x,y"), DataError);
}

TEST(Pgm, RoundTripAndHeader) {
  TempDir dir;
  Grid<std::uint8_t> img(3, 5);
  for (std::size_t i = 0; i < img.size(); ++i) img.values()[i] = static_cast<std::uint8_t>(i * 17);
  write_pgm(dir / "sub/a.pgm", img);
  EXPECT_EQ(read_pgm(dir / "sub/a.pgm"), img);
  const auto h = read_pgm_header(dir / "sub/a.pgm");
  EXPECT_EQ(h.width, 5);
  EXPECT_EQ(h.height, 3);
  EXPECT_EQ(h.maxval, 255);
}

TEST(Pgm, AcceptsCommentsRejectsOtherFormats) {
  TempDir dir;
  testing::write_text(dir / "c.pgm", std::string("P5\n# made by hand\n2 1\n255\n") + "\x01\x02");
  const auto img = read_pgm(dir / "c.pgm");
  EXPECT_EQ(img(0, 1), 2);
  testing::write_text(dir / "p2.pgm", "P2\n2 1\n255\n1 2\n");
  EXPECT_THROW(read_pgm(dir / "p2.pgm"), DataError);
  testing::write_text(dir / "short.pgm", "P5\n4 4\n255\nab");
  EXPECT_THROW(read_pgm(dir / "short.pgm"), DataError);
}

TEST(Parallel, VisitsEveryIndexOnceAndPropagatesErrors) {
  for (int threads : {1, 4}) {
    set_thread_count(threads);
    std::vector<std::atomic<int>> seen(1000);
    parallel_for(seen.size(), [&](std::size_t i) { ++seen[i]; });
    for (const auto& s : seen) EXPECT_EQ(s.load(), 1);
    EXPECT_THROW(parallel_for(100, [](std::size_t i) {
                   if (i == 37) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
  }
  set_thread_count(1);
}

}  // namespace
}  // namespace irisnet
