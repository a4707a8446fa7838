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

// Genuine/impostor score statistics. Scores are distances: a comparison is
// accepted as a match when its distance is <= the threshold.

#ifndef IRISNET_EVAL_HPP_
#define IRISNET_EVAL_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "irisnet/matcher.hpp"

namespace irisnet {

struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> impostor;
  std::size_t excluded_count = 0;
};

/// Splits scored pairs by kind; excluded pairs are only counted.
ScoreSet to_score_set(const PairScores& scores);

/// |mu_i - mu_g| / sqrt((var_g + var_i) / 2) with sample variances. Needs at
/// least two scores per side. Zero pooled variance gives 0 for equal means
/// and +infinity otherwise.
double decidability(std::span<const double> genuine, std::span<const double> impostor);

struct RocPoint {
  double threshold = 0.0;
  double fmr = 0.0;   // fraction of impostor scores <= threshold
  double fnmr = 0.0;  // fraction of genuine scores > threshold
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocResult {
  std::vector<RocPoint> points;  // one per distinct observed score, ascending
  double eer = 0.0;
};

/// Threshold sweep over the union of observed scores. The EER is where
/// FMR - FNMR first reaches zero, linearly interpolated between the bracketing
/// sweep points; the sweep is preceded by the reject-all point (0, 1).
RocResult roc_and_eer(std::span<const double> genuine, std::span<const double> impostor);

inline constexpr int kHistogramBins = 100;

/// Fixed bins over [0, 1]; a score of exactly 1 lands in the last bin.
std::vector<std::size_t> histogram(std::span<const double> scores, int bins = kHistogramBins);

struct EvalReport {
  double d_prime = 0.0;
  double eer = 0.0;
  std::vector<RocPoint> roc;
  std::vector<std::size_t> hist_genuine;
  std::vector<std::size_t> hist_impostor;
  std::size_t genuine_count = 0;
  std::size_t impostor_count = 0;
  std::size_t excluded_count = 0;
};

EvalReport evaluate(const ScoreSet& scores);

/// Writes roc.csv, hist_genuine.csv, hist_impostor.csv and summary.txt.
/// Refuses (DataError) when either score list is empty.
void export_report(const EvalReport& report, const std::filesystem::path& dir);

std::vector<RocPoint> read_roc_csv(const std::filesystem::path& path);

}  // namespace irisnet

#endif  // IRISNET_EVAL_HPP_
