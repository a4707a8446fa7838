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

#include <sstream>

#include "irisnet/cli.hpp"
#include "irisnet/coder.hpp"
#include "irisnet/matcher.hpp"
#include "irisnet/parallel.hpp"
#include "support.hpp"

namespace irisnet {
namespace {

namespace fs = std::filesystem;
using testing::slurp;
using testing::TempDir;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome irisnet(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome r;
  r.code = cli::run(args, out, err);
  set_thread_count(1);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string p(const fs::path& path) { return path.string(); }

// synth -> pairs -> align -> encode -> match -> eval under one directory.
void pipeline(const fs::path& d, const std::string& threads) {
  const std::vector<std::string> t = {"--threads", threads};
  auto with = [&](std::vector<std::string> args) {
    args.insert(args.begin(), t.begin(), t.end());
    const Outcome r = irisnet(args);
    ASSERT_EQ(r.code, 0) << args[2] << ": " << r.err;
  };
  with({"synth", "--classes", "4", "--images-per-class", "3", "--out", p(d / "data")});
  with({"pairs", "--manifest", p(d / "data/manifest.csv"), "--out", p(d / "pairs")});
  with({"align", "--manifest", p(d / "data/manifest.csv"), "--out", p(d / "aligned")});
  with({"kernels", "gabor-gen", "--out", p(d / "gabor.txt")});
  with({"encode", "--manifest", p(d / "aligned/manifest.csv"), "--kernels", p(d / "gabor.txt"), "--out",
        p(d / "codes")});
  with({"match", "--pairs", p(d / "pairs/genuine.csv"), "--pairs", p(d / "pairs/impostor.csv"), "--codes",
        p(d / "codes"), "--max-shift", "2", "--out", p(d / "scores.csv")});
  with({"eval", "--scores", p(d / "scores.csv"), "--excluded", p(d / "scores_excluded.csv"), "--out",
        p(d / "report")});
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(irisnet({}).code, cli::kUsage);
  EXPECT_EQ(irisnet({"--help"}).code, cli::kOk);
  EXPECT_EQ(irisnet({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(irisnet({"pairs", "--out", "x"}).code, cli::kUsage);
  const Outcome missing = irisnet({"pairs", "--manifest", "/nonexistent/manifest.csv", "--out", "/tmp/x"});
  EXPECT_EQ(missing.code, cli::kDataFailure);
  EXPECT_NE(missing.err.find("/nonexistent/manifest.csv"), std::string::npos);
}

TEST(Cli, NonFiniteTrainingIsNumericFailure) {
  TempDir d;
  ASSERT_EQ(irisnet({"synth", "--classes", "6", "--images-per-class", "2", "--out", p(d / "tr")}).code, 0);
  ASSERT_EQ(irisnet({"synth", "--classes", "2", "--images-per-class", "2", "--first-class", "50", "--out",
                     p(d / "va")}).code, 0);
  // A saturated bank has exactly zero gradients; with epsilon = 0 Adam's
  // update is 0/0.
  std::string bank = "6\n";
  for (const auto& k : default_kernel_sizes()) {
    bank += std::to_string(k.rows) + " " + std::to_string(k.cols) + "\n";
    for (int i = 0; i < k.rows * k.cols; ++i) {
      bank += (i % 2 ? "-1.5e308" : "1.5e308");
      bank += ((i + 1) % k.cols == 0 ? "\n" : " ");
    }
  }
  testing::write_text(d / "huge.txt", bank);
  testing::write_text(d / "c.ini", "epsilon = 0\n");
  const Outcome r = irisnet({"--config", p(d / "c.ini"), "train", "--train-manifest", p(d / "tr/manifest.csv"), "--val-manifest",
                             p(d / "va/manifest.csv"), "--init", p(d / "huge.txt"), "--out", p(d / "out"),
                             "--batches", "2", "--batch-size", "2", "--validation-triplets", "2"});
  EXPECT_EQ(r.code, cli::kNumericFailure) << r.err;
}

TEST(Cli, EmptyManifestGivesEmptyPairLists) {
  TempDir d;
  testing::write_text(d / "m.csv", "class_id,eye_side,image,mask\n");
  const Outcome r = irisnet({"pairs", "--manifest", p(d / "m.csv"), "--out", p(d / "pairs")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(read_pairs_csv(d / "pairs/genuine.csv").empty());
  EXPECT_TRUE(read_pairs_csv(d / "pairs/impostor.csv").empty());
}

TEST(Cli, PipelineIsThreadIndependent) {
  TempDir a;
  TempDir b;
  pipeline(a.path(), "1");
  pipeline(b.path(), "3");
  for (const char* f : {"pairs/genuine.csv", "pairs/impostor.csv", "aligned/alignment.csv", "scores.csv",
                        "scores_excluded.csv", "report/roc.csv", "report/summary.txt",
                        "codes/images/s00002/001.irc"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto scores = read_scores_csv(a / "scores.csv");
  const std::size_t listed = read_pairs_csv(a / "pairs/genuine.csv").size() +
                             read_pairs_csv(a / "pairs/impostor.csv").size();
  EXPECT_EQ(scores.size() + read_pairs_csv(a / "scores_excluded.csv").size(), listed);
  EXPECT_EQ(read_pairs_csv(a / "pairs/genuine.csv").size(), 4u * 3u);
}

TEST(Cli, EvalPrintsSummary) {
  TempDir d;
  pipeline(d.path(), "1");
  const Outcome r = irisnet({"eval", "--scores", p(d / "scores.csv"), "--out", p(d / "r2")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("d_prime ", 0), 0u);
  EXPECT_NE(r.out.find("\neer "), std::string::npos);
}

TEST(Cli, SelfPairScoresZeroAndMissingMaskIsNamed) {
  TempDir d;
  pipeline(d.path(), "1");
  testing::write_text(d / "self.csv", "path_a,path_b,kind\nimages/s00001/000.pgm,images/s00001/000.pgm,genuine\n");
  ASSERT_EQ(irisnet({"match", "--pairs", p(d / "self.csv"), "--codes", p(d / "codes"), "--out",
                     p(d / "self_scores.csv")}).code, 0);
  const auto s = read_scores_csv(d / "self_scores.csv");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].result.distance, 0.0);

  fs::remove(d / "data/masks/s00001/002.pgm");
  const Outcome r = irisnet({"align", "--manifest", p(d / "data/manifest.csv"), "--out", p(d / "again")});
  EXPECT_EQ(r.code, cli::kDataFailure);
  EXPECT_NE(r.err.find("masks/s00001/002.pgm"), std::string::npos) << r.err;
}

TEST(Cli, TrainInitsDifferAndResumeMatches) {
  TempDir d;
  ASSERT_EQ(irisnet({"synth", "--classes", "6", "--images-per-class", "3", "--out", p(d / "tr")}).code, 0);
  ASSERT_EQ(irisnet({"synth", "--classes", "3", "--images-per-class", "3", "--first-class", "50", "--out",
                     p(d / "va")}).code, 0);
  auto train = [&](const std::string& out, std::vector<std::string> extra) {
    std::vector<std::string> args = {"--seed", "3", "train", "--train-manifest", p(d / "tr/manifest.csv"),
                                     "--val-manifest", p(d / "va/manifest.csv"), "--out", p(d / out),
                                     "--batches", "4", "--batch-size", "2", "--validation-triplets", "4",
                                     "--validation-every", "2"};
    args.insert(args.end(), extra.begin(), extra.end());
    const Outcome r = irisnet(args);
    EXPECT_EQ(r.code, 0) << r.err;
  };
  train("gabor", {"--init", "gabor"});
  train("random", {"--init", "random"});
  EXPECT_NE(slurp(d / "gabor/kernels_init.txt"), slurp(d / "random/kernels_init.txt"));
  EXPECT_NE(slurp(d / "gabor/kernels.txt"), slurp(d / "gabor/kernels_init.txt"));

  train("split", {"--init", "gabor", "--stop-after", "2"});
  train("split", {"--init", "gabor", "--resume"});
  EXPECT_EQ(slurp(d / "split/kernels.txt"), slurp(d / "gabor/kernels.txt"));
  EXPECT_EQ(slurp(d / "split/history.csv"), slurp(d / "gabor/history.csv"));

  ASSERT_EQ(irisnet({"kernels", "inspect", "--kernels", p(d / "gabor/kernels.txt")}).code, 0);
}

}  // namespace
}  // namespace irisnet
