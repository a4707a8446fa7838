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
#include <map>

#include "irisnet/error.hpp"
#include "irisnet/matcher.hpp"
#include "irisnet/parallel.hpp"
#include "irisnet/rng.hpp"
#include "irisnet/trainer.hpp"

namespace irisnet {

namespace {

// k distinct elements of `pool` in draw order (partial Fisher-Yates).
std::vector<std::size_t> draw_distinct(std::vector<std::size_t> pool, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

struct PoolDraw {
  std::vector<std::size_t> classes;
  std::vector<std::size_t> images;
};

PoolDraw draw_pool(const TrainingSet& set, const std::vector<std::size_t>& outside_batch,
                   std::size_t pool_size, Rng& rng) {
  PoolDraw d;
  d.classes = draw_distinct(outside_batch, pool_size, rng);
  for (std::size_t c : d.classes) {
    const auto& members = set.classes()[c];
    d.images.push_back(members[rng.below(members.size())]);
  }
  return d;
}

}  // namespace

MinedBatch batch_hard_mine(const KernelBank& bank, const TrainingSet& set, const SamplingMap& map,
                           int batch_size, int pool_size, std::uint64_t seed,
                           std::uint64_t batch_index) {
  if (batch_size < 1 || pool_size < 1) throw DataError("batch and pool sizes must be positive");
  const std::size_t x = static_cast<std::size_t>(batch_size);
  const std::size_t pool = static_cast<std::size_t>(pool_size);

  std::vector<std::size_t> eligible;
  for (std::size_t c = 0; c < set.classes().size(); ++c) {
    if (set.classes()[c].size() >= 2) eligible.push_back(c);
  }
  if (eligible.size() < x) {
    throw DataError("batch-hard mining needs " + std::to_string(x) +
                    " classes with at least two images, found " + std::to_string(eligible.size()));
  }
  if (set.classes().size() < x + pool) {
    throw DataError("batch-hard mining needs " + std::to_string(x + pool) + " classes, found " +
                    std::to_string(set.classes().size()));
  }

  const std::uint64_t batch_key = mix_keys(seed, batch_index);
  Rng class_rng(batch_key, 0);
  MinedBatch batch;
  batch.batch_classes = draw_distinct(eligible, x, class_rng);

  std::vector<std::size_t> outside;
  for (std::size_t c = 0; c < set.classes().size(); ++c) {
    if (std::find(batch.batch_classes.begin(), batch.batch_classes.end(), c) ==
        batch.batch_classes.end()) {
      outside.push_back(c);
    }
  }

  // Draws first, so randomness never depends on evaluation order.
  struct Draw {
    std::size_t anchor = 0;
    std::size_t positive = 0;
    PoolDraw pool;
  };
  std::vector<Draw> draws(x);
  std::vector<Rng> rngs;
  rngs.reserve(x);
  for (std::size_t t = 0; t < x; ++t) {
    rngs.emplace_back(batch_key, 1 + t);
    Rng& rng = rngs.back();
    const auto& members = set.classes()[batch.batch_classes[t]];
    const std::size_t a = rng.below(members.size());
    std::size_t p = rng.below(members.size() - 1);
    if (p >= a) ++p;
    draws[t].anchor = members[a];
    draws[t].positive = members[p];
    draws[t].pool = draw_pool(set, outside, pool, rng);
  }

  // Weights are frozen for the whole batch, so each image is encoded once.
  std::vector<std::size_t> needed;
  for (const auto& d : draws) {
    needed.push_back(d.anchor);
    needed.insert(needed.end(), d.pool.images.begin(), d.pool.images.end());
  }
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  std::vector<Features> encoded(needed.size());
  parallel_for(needed.size(), [&](std::size_t i) {
    encoded[i] = encode_features(set.sample(needed[i]).image, bank, map);
  });
  std::map<std::size_t, const Features*> features;
  for (std::size_t i = 0; i < needed.size(); ++i) features.emplace(needed[i], &encoded[i]);

  batch.triplets.resize(x);
  parallel_for(x, [&](std::size_t t) {
    Draw& d = draws[t];
    const Features& anchor_features = *features.at(d.anchor);
    MinedTriplet& out = batch.triplets[t];
    out.anchor_class = batch.batch_classes[t];

    for (int attempt = 0; attempt < 2; ++attempt) {
      if (attempt == 1) d.pool = draw_pool(set, outside, pool, rngs[t]);
      out.pool_classes = d.pool.classes;
      out.candidates = d.pool.images;
      out.candidate_d_an.assign(out.candidates.size(), std::nullopt);
      std::optional<std::size_t> best;
      for (std::size_t c = 0; c < out.candidates.size(); ++c) {
        const std::size_t image = out.candidates[c];
        const Bits mask = sample_mask(
            combine_masks(set.sample(d.anchor).mask, set.sample(image).mask), map);
        Features redrawn;
        const Features* cand = nullptr;
        if (auto it = features.find(image); it != features.end()) {
          cand = it->second;
        } else {
          redrawn = encode_features(set.sample(image).image, bank, map);
          cand = &redrawn;
        }
        try {
          out.candidate_d_an[c] = masked_distance(anchor_features, *cand, mask, mask);
        } catch (const UnscorableComparison&) {
          continue;
        }
        if (!best || *out.candidate_d_an[c] < *out.candidate_d_an[*best]) best = c;
      }
      if (best) {
        out.chosen = *best;
        out.triplet = make_triplet(set, d.anchor, d.positive, out.candidates[*best], map);
        return;
      }
    }
    throw DegenerateTriplet("no negative candidate overlaps the anchor mask of " +
                            set.sample(d.anchor).key);
  });
  return batch;
}

}  // namespace irisnet
