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

#ifndef IRISNET_MATCHER_HPP_
#define IRISNET_MATCHER_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "irisnet/coder.hpp"
#include "irisnet/iris_data.hpp"

namespace irisnet {

/// d = sum |s1 - s2| m1 m2 / sum m1 m2.
/// Throws UnscorableComparison when the masks share no valid position.
double masked_distance(std::span<const double> s1, std::span<const double> s2,
                       std::span<const std::uint8_t> m1, std::span<const std::uint8_t> m2);

struct HammingCount {
  std::int64_t mismatches = 0;
  std::int64_t valid = 0;
  double fraction() const { return static_cast<double>(mismatches) / static_cast<double>(valid); }
};

/// Integer fractional Hamming distance between bit vectors. Never throws on
/// zero overlap; callers check `valid`.
HammingCount hamming_count(std::span<const std::uint8_t> b1, std::span<const std::uint8_t> b2,
                           std::span<const std::uint8_t> m1, std::span<const std::uint8_t> m2);

/// Binary masked distance; same value as the real-valued form on 0/1 inputs.
double masked_distance(std::span<const std::uint8_t> b1, std::span<const std::uint8_t> b2,
                       std::span<const std::uint8_t> m1, std::span<const std::uint8_t> m2);

struct MatchResult {
  double distance = 0.0;
  std::int64_t valid_bits = 0;
  int shift_used = 0;
};

/// Code (bits and mask bits) circularly shifted by `shift` lattice columns
/// in every row of every map; positive shifts move content right.
IrisCode shift_code(const IrisCode& code, const GridShape& grid, int shift);

/// Minimum fractional Hamming distance over lattice-column shifts of c2 in
/// [-max_shift, max_shift]. Ties go to the smallest |shift|, negative first.
/// Throws ShiftUnsupported if max_shift > 0 on a non-lattice map and
/// UnscorableComparison if no shift has overlapping masks.
MatchResult match_codes(const IrisCode& c1, const IrisCode& c2, int max_shift,
                        const SamplingMap& map);

struct ScoredPair {
  PathPair pair;
  MatchResult result;
};

struct PairScores {
  std::vector<ScoredPair> scored;   // input order
  std::vector<PathPair> excluded;   // unscorable, input order
};

/// Scores every pair; throws DataError if a referenced code is missing.
PairScores score_pairs(const std::vector<PathPair>& pairs,
                       const std::map<std::string, IrisCode>& codes, int max_shift,
                       const SamplingMap& map);

/// `path_a,path_b,kind,distance,valid_bits,shift`.
void write_scores_csv(const std::filesystem::path& path, const std::vector<ScoredPair>& scores);
std::vector<ScoredPair> read_scores_csv(const std::filesystem::path& path);

}  // namespace irisnet

#endif  // IRISNET_MATCHER_HPP_
