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

#include "irisnet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"

namespace irisnet {

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments sample_moments(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  Moments m;
  m.mean = sum / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m.mean) * (v - m.mean);
  m.variance = ss / static_cast<double>(x.size() - 1);
  return m;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  return out;
}

void write_histogram(const std::filesystem::path& path, const std::vector<std::size_t>& counts) {
  auto out = open_output(path);
  out << "bin_low,bin_high,count\n";
  const double width = 1.0 / static_cast<double>(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out << csv::format_double(i * width) << ',' << csv::format_double((i + 1) * width) << ','
        << counts[i] << '\n';
  }
}

}  // namespace

ScoreSet to_score_set(const PairScores& scores) {
  ScoreSet set;
  for (const auto& s : scores.scored) {
    (s.pair.kind == PairKind::genuine ? set.genuine : set.impostor).push_back(s.result.distance);
  }
  set.excluded_count = scores.excluded.size();
  return set;
}

double decidability(std::span<const double> genuine, std::span<const double> impostor) {
  if (genuine.size() < 2 || impostor.size() < 2) {
    throw DataError("decidability needs at least two genuine and two impostor scores");
  }
  const Moments g = sample_moments(genuine);
  const Moments i = sample_moments(impostor);
  const double gap = std::abs(i.mean - g.mean);
  const double pooled = (g.variance + i.variance) / 2.0;
  if (pooled == 0.0) return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return gap / std::sqrt(pooled);
}

RocResult roc_and_eer(std::span<const double> genuine, std::span<const double> impostor) {
  if (genuine.empty() || impostor.empty()) {
    throw DataError("ROC needs nonempty genuine and impostor score lists");
  }
  std::vector<double> gen(genuine.begin(), genuine.end());
  std::vector<double> imp(impostor.begin(), impostor.end());
  std::sort(gen.begin(), gen.end());
  std::sort(imp.begin(), imp.end());
  std::vector<double> thresholds;
  thresholds.reserve(gen.size() + imp.size());
  std::merge(gen.begin(), gen.end(), imp.begin(), imp.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double ng = static_cast<double>(gen.size());
  const double ni = static_cast<double>(imp.size());
  RocResult result;
  result.points.reserve(thresholds.size());
  std::size_t gi = 0;
  std::size_t ii = 0;
  for (double t : thresholds) {
    while (gi < gen.size() && gen[gi] <= t) ++gi;
    while (ii < imp.size() && imp[ii] <= t) ++ii;
    result.points.push_back({t, static_cast<double>(ii) / ni,
                             static_cast<double>(gen.size() - gi) / ng});
  }

  double prev_fmr = 0.0;
  double prev_fnmr = 1.0;
  for (const auto& p : result.points) {
    const double diff = p.fmr - p.fnmr;
    if (diff >= 0.0) {
      if (diff == 0.0) {
        result.eer = p.fmr;
      } else {
        const double prev_diff = prev_fmr - prev_fnmr;
        const double alpha = -prev_diff / (diff - prev_diff);
        result.eer = prev_fmr + alpha * (p.fmr - prev_fmr);
      }
      break;
    }
    prev_fmr = p.fmr;
    prev_fnmr = p.fnmr;
  }
  return result;
}

std::vector<std::size_t> histogram(std::span<const double> scores, int bins) {
  if (bins <= 0) throw DataError("histogram needs a positive bin count");
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw DataError("score outside [0,1]");
    const int b = std::min(bins - 1, static_cast<int>(std::floor(s * bins)));
    ++counts[static_cast<std::size_t>(b)];
  }
  return counts;
}

EvalReport evaluate(const ScoreSet& scores) {
  EvalReport r;
  r.genuine_count = scores.genuine.size();
  r.impostor_count = scores.impostor.size();
  r.excluded_count = scores.excluded_count;
  r.hist_genuine = histogram(scores.genuine);
  r.hist_impostor = histogram(scores.impostor);
  if (!scores.genuine.empty() && !scores.impostor.empty()) {
    auto roc = roc_and_eer(scores.genuine, scores.impostor);
    r.roc = std::move(roc.points);
    r.eer = roc.eer;
  }
  if (scores.genuine.size() >= 2 && scores.impostor.size() >= 2) {
    r.d_prime = decidability(scores.genuine, scores.impostor);
  } else {
    r.d_prime = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

void export_report(const EvalReport& report, const std::filesystem::path& dir) {
  if (report.genuine_count == 0) throw DataError("refusing to export: empty genuine score list");
  if (report.impostor_count == 0) throw DataError("refusing to export: empty impostor score list");
  std::filesystem::create_directories(dir);

  {
    auto out = open_output(dir / "roc.csv");
    out << "threshold,fmr,fnmr\n";
    for (const auto& p : report.roc) {
      out << csv::format_double(p.threshold) << ',' << csv::format_double(p.fmr) << ','
          << csv::format_double(p.fnmr) << '\n';
    }
  }
  write_histogram(dir / "hist_genuine.csv", report.hist_genuine);
  write_histogram(dir / "hist_impostor.csv", report.hist_impostor);

  auto out = open_output(dir / "summary.txt");
  out << "d_prime " << csv::format_double(report.d_prime) << '\n'
      << "eer " << csv::format_double(report.eer) << '\n'
      << "genuine_scores " << report.genuine_count << '\n'
      << "impostor_scores " << report.impostor_count << '\n'
      << "excluded_pairs " << report.excluded_count << '\n';
  if (!out) throw DataError("write failed: " + (dir / "summary.txt").string());
}

std::vector<RocPoint> read_roc_csv(const std::filesystem::path& path) {
  std::vector<RocPoint> points;
  for (const auto& row : csv::read(path, "threshold,fmr,fnmr")) {
    if (row.size() != 3) throw DataError(path.string() + ": expected 3 fields per ROC row");
    points.push_back({csv::parse_double(row[0], path.string()), csv::parse_double(row[1], path.string()),
                      csv::parse_double(row[2], path.string())});
  }
  return points;
}

}  // namespace irisnet
