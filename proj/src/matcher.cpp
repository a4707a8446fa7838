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

#include "irisnet/matcher.hpp"

#include <cmath>
#include <fstream>
#include <optional>

#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/parallel.hpp"

namespace irisnet {

namespace {

void require_lengths(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  if (a != b || a != c || a != d) throw DataError("masked_distance: length mismatch");
}

}  // namespace

double masked_distance(std::span<const double> s1, std::span<const double> s2,
                       std::span<const std::uint8_t> m1, std::span<const std::uint8_t> m2) {
  require_lengths(s1.size(), s2.size(), m1.size(), m2.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    const double m = static_cast<double>(m1[i]) * static_cast<double>(m2[i]);
    num += std::abs(s1[i] - s2[i]) * m;
    den += m;
  }
  if (den == 0.0) throw UnscorableComparison("masks share no valid position");
  return num / den;
}

HammingCount hamming_count(std::span<const std::uint8_t> b1, std::span<const std::uint8_t> b2,
                           std::span<const std::uint8_t> m1, std::span<const std::uint8_t> m2) {
  require_lengths(b1.size(), b2.size(), m1.size(), m2.size());
  HammingCount h;
  for (std::size_t i = 0; i < b1.size(); ++i) {
    if (m1[i] && m2[i]) {
      ++h.valid;
      if ((b1[i] != 0) != (b2[i] != 0)) ++h.mismatches;
    }
  }
  return h;
}

double masked_distance(std::span<const std::uint8_t> b1, std::span<const std::uint8_t> b2,
                       std::span<const std::uint8_t> m1, std::span<const std::uint8_t> m2) {
  const auto h = hamming_count(b1, b2, m1, m2);
  if (h.valid == 0) throw UnscorableComparison("masks share no valid position");
  return h.fraction();
}

IrisCode shift_code(const IrisCode& code, const GridShape& grid, int shift) {
  const std::size_t per_map = static_cast<std::size_t>(grid.rows * grid.cols);
  if (code.bits.size() != code.mask_bits.size() || code.bits.size() % per_map != 0) {
    throw DataError("code length does not match sampling lattice");
  }
  const int s = ((shift % grid.cols) + grid.cols) % grid.cols;
  IrisCode out{Bits(code.bits.size()), Bits(code.mask_bits.size())};
  const std::size_t maps = code.bits.size() / per_map;
  for (std::size_t k = 0; k < maps; ++k) {
    for (int r = 0; r < grid.rows; ++r) {
      const std::size_t base = k * per_map + static_cast<std::size_t>(r * grid.cols);
      for (int c = 0; c < grid.cols; ++c) {
        const std::size_t dst = base + static_cast<std::size_t>((c + s) % grid.cols);
        out.bits[dst] = code.bits[base + c];
        out.mask_bits[dst] = code.mask_bits[base + c];
      }
    }
  }
  return out;
}

MatchResult match_codes(const IrisCode& c1, const IrisCode& c2, int max_shift,
                        const SamplingMap& map) {
  if (max_shift < 0) throw DataError("max_shift must be non-negative");
  if (max_shift > 0 && !map.grid()) {
    throw ShiftUnsupported("shift search needs a lattice-shaped shared sampling map");
  }

  std::optional<MatchResult> best;
  for (int step = 0; step <= 2 * max_shift; ++step) {
    // 0, -1, +1, -2, +2, ...
    const int shift = (step % 2 == 1) ? -(step + 1) / 2 : step / 2;
    const IrisCode candidate = shift == 0 ? c2 : shift_code(c2, *map.grid(), shift);
    const auto h = hamming_count(c1.bits, candidate.bits, c1.mask_bits, candidate.mask_bits);
    if (h.valid == 0) continue;
    const double d = h.fraction();
    if (!best || d < best->distance) best = MatchResult{d, h.valid, shift};
  }
  if (!best) throw UnscorableComparison("masks share no valid position at any shift");
  return *best;
}

PairScores score_pairs(const std::vector<PathPair>& pairs,
                       const std::map<std::string, IrisCode>& codes, int max_shift,
                       const SamplingMap& map) {
  std::vector<std::pair<const IrisCode*, const IrisCode*>> resolved;
  resolved.reserve(pairs.size());
  for (const auto& p : pairs) {
    const auto a = codes.find(p.a);
    const auto b = codes.find(p.b);
    if (a == codes.end()) throw DataError("missing iris code for " + p.a);
    if (b == codes.end()) throw DataError("missing iris code for " + p.b);
    resolved.emplace_back(&a->second, &b->second);
  }

  std::vector<std::optional<MatchResult>> results(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    try {
      results[i] = match_codes(*resolved[i].first, *resolved[i].second, max_shift, map);
    } catch (const UnscorableComparison&) {
      results[i].reset();
    }
  });

  PairScores out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (results[i]) {
      out.scored.push_back({pairs[i], *results[i]});
    } else {
      out.excluded.push_back(pairs[i]);
    }
  }
  return out;
}

void write_scores_csv(const std::filesystem::path& path, const std::vector<ScoredPair>& scores) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "path_a,path_b,kind,distance,valid_bits,shift\n";
  for (const auto& s : scores) {
    out << s.pair.a << ',' << s.pair.b << ',' << to_string(s.pair.kind) << ','
        << csv::format_double(s.result.distance) << ',' << s.result.valid_bits << ','
        << s.result.shift_used << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<ScoredPair> read_scores_csv(const std::filesystem::path& path) {
  std::vector<ScoredPair> scores;
  for (const auto& row : csv::read(path, "path_a,path_b,kind,distance,valid_bits,shift")) {
    if (row.size() != 6) throw DataError(path.string() + ": expected 6 fields per score row");
    ScoredPair s;
    s.pair = {row[0], row[1], parse_pair_kind(row[2])};
    s.result.distance = csv::parse_double(row[3], path.string());
    s.result.valid_bits = csv::parse_int(row[4], path.string());
    s.result.shift_used = static_cast<int>(csv::parse_int(row[5], path.string()));
    if (!(s.result.distance >= 0.0 && s.result.distance <= 1.0)) {
      throw DataError(path.string() + ": score outside [0,1]");
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

}  // namespace irisnet
