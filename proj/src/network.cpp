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

// Triplet losses, training data and the hand-derived forward/backward pass.

#include <algorithm>
#include <cmath>
#include <map>

#include "irisnet/conv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/matcher.hpp"
#include "irisnet/trainer.hpp"

namespace irisnet {

double soft_margin_loss(double d_ap, double d_an) {
  const double z = d_ap - d_an;
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double hinge_loss(double d_ap, double d_an, double alpha) {
  return std::max(0.0, d_ap - d_an + alpha);
}

double triplet_loss(const LossConfig& cfg, double d_ap, double d_an) {
  return cfg.kind == LossKind::soft_margin ? soft_margin_loss(d_ap, d_an)
                                           : hinge_loss(d_ap, d_an, cfg.alpha);
}

double loss_slope(const LossConfig& cfg, double d_ap, double d_an) {
  if (cfg.kind == LossKind::soft_margin) return sigmoid(d_ap - d_an);
  return (d_ap - d_an + cfg.alpha) > 0.0 ? 1.0 : 0.0;
}

// --- training data -----------------------------------------------------------

TrainingSet::TrainingSet(std::vector<TrainingSample> samples) {
  std::stable_sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
    return std::tie(a.class_id, a.key) < std::tie(b.class_id, b.key);
  });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && samples[i].key == samples[i - 1].key && samples[i].class_id == samples[i - 1].class_id) {
      throw DataError("duplicate training sample " + samples[i].key);
    }
    if (!samples[i].image.same_shape(samples[i].mask)) {
      throw DataError("image/mask shape mismatch for " + samples[i].key);
    }
    if (class_ids_.empty() || class_ids_.back() != samples[i].class_id) {
      class_ids_.push_back(samples[i].class_id);
      classes_.emplace_back();
    }
    classes_.back().push_back(i);
    by_key_.emplace(samples[i].key, i);
  }
  samples_ = std::move(samples);
}

TrainingSet TrainingSet::from_manifest(const DatasetManifest& manifest) {
  std::vector<TrainingSample> samples;
  samples.reserve(manifest.size());
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& e = manifest.entries()[i];
    samples.push_back({e.image, e.class_id, manifest.load_image(i).pixels(),
                       manifest.load_mask(i).bits()});
  }
  return TrainingSet(std::move(samples));
}

std::size_t TrainingSet::index_of(const std::string& key) const {
  const auto it = by_key_.find(key);
  if (it == by_key_.end()) throw DataError("unknown sample " + key);
  return it->second;
}

Triplet make_triplet(const TrainingSet& set, std::size_t anchor, std::size_t positive,
                     std::size_t negative, const SamplingMap& map) {
  const auto& a = set.sample(anchor);
  Triplet t;
  t.anchor = anchor;
  t.positive = positive;
  t.negative = negative;
  t.ap_mask = sample_mask(combine_masks(a.mask, set.sample(positive).mask), map);
  t.an_mask = sample_mask(combine_masks(a.mask, set.sample(negative).mask), map);
  return t;
}

// --- forward -----------------------------------------------------------------------

ForwardPass forward(const KernelBank& bank, const Matrix& anchor, const Matrix& positive,
                    const Matrix& negative, std::span<const std::uint8_t> ap_mask,
                    std::span<const std::uint8_t> an_mask, const SamplingMap& map,
                    const LossConfig& loss) {
  const auto has_valid = [](std::span<const std::uint8_t> m) {
    return std::any_of(m.begin(), m.end(), [](std::uint8_t b) { return b != 0; });
  };
  if (!has_valid(ap_mask)) throw DegenerateTriplet("anchor/positive combined mask is empty");
  if (!has_valid(an_mask)) throw DegenerateTriplet("anchor/negative combined mask is empty");

  ForwardPass pass;
  pass.anchor = encode_features(anchor, bank, map);
  pass.positive = encode_features(positive, bank, map);
  pass.negative = encode_features(negative, bank, map);
  pass.ap_mask.assign(ap_mask.begin(), ap_mask.end());
  pass.an_mask.assign(an_mask.begin(), an_mask.end());
  // The combined mask already is the product m1 * m2, so it serves as both.
  pass.d_ap = masked_distance(pass.anchor, pass.positive, pass.ap_mask, pass.ap_mask);
  pass.d_an = masked_distance(pass.anchor, pass.negative, pass.an_mask, pass.an_mask);
  pass.loss = triplet_loss(loss, pass.d_ap, pass.d_an);
  return pass;
}

ForwardPass forward(const KernelBank& bank, const TrainingSet& set, const Triplet& triplet,
                    const SamplingMap& map, const LossConfig& loss) {
  return forward(bank, set.sample(triplet.anchor).image, set.sample(triplet.positive).image,
                 set.sample(triplet.negative).image, triplet.ap_mask, triplet.an_mask, map, loss);
}

// --- backward ------------------------------------------------------------------------

GradientSet zero_gradients(const KernelBank& bank) {
  GradientSet g;
  for (const auto& k : bank.kernels()) g.emplace_back(k.rows(), k.cols(), 0.0);
  return g;
}

namespace {

double sign(double x) { return (x > 0.0) - (x < 0.0); }

double mask_count(const Bits& m) {
  double n = 0.0;
  for (auto b : m) n += b;
  return n;
}

// grad(u, v) += scale * padded(y + u, x + v)
void accumulate(Matrix& grad, const Matrix& image, int y, int x, double scale) {
  const int kh = grad.rows();
  const int kw = grad.cols();
  for (int u = 0; u < kh; ++u) {
    auto g = grad.row(u);
    for (int v = 0; v < kw; ++v) g[v] += scale * padded_value(image, kh, kw, y + u, x + v);
  }
}

}  // namespace

GradientSet backward(const ForwardPass& pass, const KernelBank& bank, const Matrix& anchor,
                     const Matrix& positive, const Matrix& negative, const SamplingMap& map,
                     const LossConfig& loss) {
  const double slope = loss_slope(loss, pass.d_ap, pass.d_an);  // dL/dd_ap = -dL/dd_an
  const double n_ap = mask_count(pass.ap_mask);
  const double n_an = mask_count(pass.an_mask);

  GradientSet grads = zero_gradients(bank);
  if (slope == 0.0) return grads;

  const int points = map.points_per_map();
  for (int k = 0; k < kBankSize; ++k) {
    const auto& pts = map.points(k);
    for (int i = 0; i < points; ++i) {
      const std::size_t idx = static_cast<std::size_t>(k * points + i);
      const double fa = pass.anchor[idx];
      const double fp = pass.positive[idx];
      const double fn = pass.negative[idx];
      // d(d_ap)/d(fa) and d(d_an)/d(fa); the other image gets the negation.
      const double g_ap = pass.ap_mask[idx] ? sign(fa - fp) / n_ap : 0.0;
      const double g_an = pass.an_mask[idx] ? sign(fa - fn) / n_an : 0.0;
      const double dl_dfa = slope * (g_ap - g_an);
      const double dl_dfp = -slope * g_ap;
      const double dl_dfn = slope * g_an;

      const int y = pts[i].row;
      const int x = pts[i].col;
      Matrix& grad = grads[static_cast<std::size_t>(k)];
      if (dl_dfa != 0.0) accumulate(grad, anchor, y, x, dl_dfa * fa * (1.0 - fa));
      if (dl_dfp != 0.0) accumulate(grad, positive, y, x, dl_dfp * fp * (1.0 - fp));
      if (dl_dfn != 0.0) accumulate(grad, negative, y, x, dl_dfn * fn * (1.0 - fn));
    }
  }
  return grads;
}

GradientSet backward(const ForwardPass& pass, const KernelBank& bank, const TrainingSet& set,
                     const Triplet& triplet, const SamplingMap& map, const LossConfig& loss) {
  return backward(pass, bank, set.sample(triplet.anchor).image, set.sample(triplet.positive).image,
                  set.sample(triplet.negative).image, map, loss);
}

}  // namespace irisnet
