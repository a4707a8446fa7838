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

#include <algorithm>
#include <fstream>

#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/parallel.hpp"
#include "irisnet/rng.hpp"
#include "irisnet/trainer.hpp"

namespace irisnet {

namespace {

bool any_set(const Bits& bits) {
  return std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
}

constexpr int kMaxDrawsPerTriplet = 64;

}  // namespace

std::vector<Triplet> build_validation_set(const TrainingSet& set, int count, std::uint64_t seed,
                                          const SamplingMap& map) {
  if (count < 0) throw DataError("validation triplet count must be non-negative");
  std::vector<std::size_t> eligible;
  for (std::size_t c = 0; c < set.classes().size(); ++c) {
    if (set.classes()[c].size() >= 2) eligible.push_back(c);
  }
  if (count > 0 && (eligible.empty() || set.classes().size() < 2)) {
    throw DataError("validation set needs two classes, one of them with two images");
  }

  Rng rng(seed, 0x76616c6964ULL);
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(count));
  const std::size_t n_classes = set.classes().size();
  for (int n = 0; n < count; ++n) {
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxDrawsPerTriplet && !accepted; ++attempt) {
      const std::size_t cls = eligible[rng.below(eligible.size())];
      const auto& members = set.classes()[cls];
      const std::size_t a = rng.below(members.size());
      std::size_t p = rng.below(members.size() - 1);
      if (p >= a) ++p;
      std::size_t other = rng.below(n_classes - 1);
      if (other >= cls) ++other;
      const auto& negatives = set.classes()[other];
      const std::size_t neg = negatives[rng.below(negatives.size())];
      Triplet t = make_triplet(set, members[a], members[p], neg, map);
      if (any_set(t.ap_mask) && any_set(t.an_mask)) {
        triplets.push_back(std::move(t));
        accepted = true;
      }
    }
    if (!accepted) throw DegenerateTriplet("could not draw a validation triplet with valid masks");
  }
  return triplets;
}

void save_triplets(const std::filesystem::path& path, const TrainingSet& set,
                   const std::vector<Triplet>& triplets) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "anchor,positive,negative\n";
  for (const auto& t : triplets) {
    out << set.sample(t.anchor).key << ',' << set.sample(t.positive).key << ','
        << set.sample(t.negative).key << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<Triplet> load_triplets(const std::filesystem::path& path, const TrainingSet& set,
                                   const SamplingMap& map) {
  std::vector<Triplet> triplets;
  for (const auto& row : csv::read(path, "anchor,positive,negative")) {
    if (row.size() != 3) throw DataError(path.string() + ": expected 3 fields per triplet");
    triplets.push_back(
        make_triplet(set, set.index_of(row[0]), set.index_of(row[1]), set.index_of(row[2]), map));
  }
  return triplets;
}

double validation_loss(const KernelBank& bank, const TrainingSet& set,
                       const std::vector<Triplet>& triplets, const SamplingMap& map,
                       const LossConfig& loss) {
  if (triplets.empty()) return 0.0;
  std::vector<double> losses(triplets.size());
  parallel_for(triplets.size(), [&](std::size_t i) {
    losses[i] = forward(bank, set, triplets[i], map, loss).loss;
  });
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(losses.size());
}

}  // namespace irisnet
