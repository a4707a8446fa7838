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

// Learning the kernel bank with a masked triplet loss.
//
// Three images pass through the same bank. Distances use the combined
// (anchor AND other) occlusion mask pushed through the bit-sampling layer, so
// occluded pixels never contribute to the loss or its gradient. Negatives are
// mined batch-hard: per anchor/positive pair, the candidate from a pool of
// other classes with the smallest anchor/negative distance.

#ifndef IRISNET_TRAINER_HPP_
#define IRISNET_TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irisnet/coder.hpp"
#include "irisnet/iris_data.hpp"
#include "irisnet/matrix.hpp"

namespace irisnet {

// --- losses ------------------------------------------------------------------

enum class LossKind { soft_margin, hinge };

struct LossConfig {
  LossKind kind = LossKind::soft_margin;
  double alpha = 0.2;  // hinge margin
};

/// log(1 + exp(d_ap - d_an)), evaluated as max(z, 0) + log1p(exp(-|z|)).
double soft_margin_loss(double d_ap, double d_an);

/// max(0, d_ap - d_an + alpha).
double hinge_loss(double d_ap, double d_an, double alpha);

double triplet_loss(const LossConfig& cfg, double d_ap, double d_an);

/// dL/dd_ap; dL/dd_an is its negation for both losses.
double loss_slope(const LossConfig& cfg, double d_ap, double d_an);

// --- in-memory training data ---------------------------------------------------

struct TrainingSample {
  std::string key;  // manifest image path
  std::string class_id;
  Matrix image;
  BitGrid mask;
};

/// Samples grouped by class, classes in class_id order.
class TrainingSet {
 public:
  TrainingSet() = default;
  explicit TrainingSet(std::vector<TrainingSample> samples);

  static TrainingSet from_manifest(const DatasetManifest& manifest);

  const std::vector<TrainingSample>& samples() const { return samples_; }
  const TrainingSample& sample(std::size_t i) const { return samples_.at(i); }
  const std::vector<std::vector<std::size_t>>& classes() const { return classes_; }
  const std::vector<std::string>& class_ids() const { return class_ids_; }

  /// Sample index by key; throws DataError if absent.
  std::size_t index_of(const std::string& key) const;

 private:
  std::vector<TrainingSample> samples_;
  std::vector<std::vector<std::size_t>> classes_;
  std::vector<std::string> class_ids_;
  std::map<std::string, std::size_t> by_key_;
};

struct Triplet {
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  Bits ap_mask;  // sample_mask(anchor.mask AND positive.mask)
  Bits an_mask;  // sample_mask(anchor.mask AND negative.mask)
};

Triplet make_triplet(const TrainingSet& set, std::size_t anchor, std::size_t positive,
                     std::size_t negative, const SamplingMap& map);

// --- forward / backward ----------------------------------------------------------

struct ForwardPass {
  Features anchor;
  Features positive;
  Features negative;
  Bits ap_mask;
  Bits an_mask;
  double d_ap = 0.0;
  double d_an = 0.0;
  double loss = 0.0;
};

/// Shared-weight forward pass over explicit images. Throws DegenerateTriplet
/// if either combined mask has no set bit.
ForwardPass forward(const KernelBank& bank, const Matrix& anchor, const Matrix& positive,
                    const Matrix& negative, std::span<const std::uint8_t> ap_mask,
                    std::span<const std::uint8_t> an_mask, const SamplingMap& map,
                    const LossConfig& loss);

ForwardPass forward(const KernelBank& bank, const TrainingSet& set, const Triplet& triplet,
                    const SamplingMap& map, const LossConfig& loss);

/// Per-kernel weight gradients, shaped like the bank.
using GradientSet = std::vector<Matrix>;

GradientSet zero_gradients(const KernelBank& bank);

/// Exact gradient of the triplet loss w.r.t. every kernel weight. Uses
/// sign(0) = 0 for the absolute value.
GradientSet backward(const ForwardPass& pass, const KernelBank& bank, const Matrix& anchor,
                     const Matrix& positive, const Matrix& negative, const SamplingMap& map,
                     const LossConfig& loss);

GradientSet backward(const ForwardPass& pass, const KernelBank& bank, const TrainingSet& set,
                     const Triplet& triplet, const SamplingMap& map, const LossConfig& loss);

// --- batch-hard mining -------------------------------------------------------------

struct MinedTriplet {
  Triplet triplet;
  std::size_t anchor_class = 0;
  std::vector<std::size_t> pool_classes;             // B' for this pair (last draw)
  std::vector<std::size_t> candidates;               // one image per pool class
  std::vector<std::optional<double>> candidate_d_an; // nullopt: zero mask overlap
  std::size_t chosen = 0;                            // index into candidates
};

struct MinedBatch {
  std::vector<std::size_t> batch_classes;  // B
  std::vector<MinedTriplet> triplets;
};

/// Draws batch_size distinct classes, a random anchor and distinct positive
/// from each, then for every pair pool_size further classes outside the batch
/// with one random image each, and keeps the candidate with minimal d_an under
/// `bank` (ties to the lowest candidate index). Randomness is keyed by
/// (seed, batch_index). Candidates with no mask overlap are skipped; if a
/// whole pool is skipped it is redrawn once before failing.
MinedBatch batch_hard_mine(const KernelBank& bank, const TrainingSet& set, const SamplingMap& map,
                           int batch_size, int pool_size, std::uint64_t seed,
                           std::uint64_t batch_index);

// --- optimizer -------------------------------------------------------------------

enum class OptimizerKind { adam, sgd_momentum };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double momentum = 0.9;  // sgd_momentum only
};

/// First/second moments flattened in bank order (kernel 0 row-major, ...).
/// SGD with momentum keeps its velocity in `m`.
struct OptimizerState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;
  friend bool operator==(const OptimizerState&, const OptimizerState&) = default;
};

/// Bias-corrected Adam update. Throws NumericError on non-finite gradients.
void adam_step(KernelBank& bank, const GradientSet& grads, OptimizerState& state,
               const OptimizerConfig& cfg);

void optimizer_step(KernelBank& bank, const GradientSet& grads, OptimizerState& state,
                    const OptimizerConfig& cfg);

void save_optimizer_state(const OptimizerState& state, const std::filesystem::path& path);
OptimizerState load_optimizer_state(const std::filesystem::path& path);

// --- validation --------------------------------------------------------------------

/// Fixed random triplets (no mining) drawn from `set`; triplets whose combined
/// masks are empty are redrawn.
std::vector<Triplet> build_validation_set(const TrainingSet& set, int count, std::uint64_t seed,
                                          const SamplingMap& map);

/// `anchor,positive,negative` sample keys.
void save_triplets(const std::filesystem::path& path, const TrainingSet& set,
                   const std::vector<Triplet>& triplets);
std::vector<Triplet> load_triplets(const std::filesystem::path& path, const TrainingSet& set,
                                   const SamplingMap& map);

/// Mean loss over the triplets.
double validation_loss(const KernelBank& bank, const TrainingSet& set,
                       const std::vector<Triplet>& triplets, const SamplingMap& map,
                       const LossConfig& loss);

// --- training loop -----------------------------------------------------------------

struct TrainConfig {
  int batch_size = 64;
  int pool_size = 0;  // 0: same as batch_size
  int total_batches = 20000;
  int validation_triplets = 2048;
  int validation_every = 250;
  int checkpoint_every = 1000;
  std::uint64_t seed = 0;
  LossConfig loss;
  OptimizerConfig optimizer;

  int effective_pool_size() const { return pool_size > 0 ? pool_size : batch_size; }
};

/// Flat `key = value` file; '#' and ';' start comments. Unknown keys are errors.
TrainConfig load_train_config(const std::filesystem::path& path);

/// Every resolved setting as `key = value` lines, parseable by load_train_config.
std::string describe(const TrainConfig& cfg);

struct ValidationPoint {
  int batch = 0;  // number of completed batches when evaluated
  double loss = 0.0;
};

struct TrainHistory {
  double initial_validation_loss = 0.0;
  std::vector<double> train_loss;  // one per batch
  std::vector<ValidationPoint> validation;
  std::vector<double> seconds;     // wall clock per batch; not persisted
  std::vector<int> skipped;        // degenerate triplets per batch
};

/// `batch,train_loss,val_loss`; row 0 holds the initial validation loss.
void write_history_csv(const std::filesystem::path& path, const TrainHistory& history);
TrainHistory read_history_csv(const std::filesystem::path& path);

struct TrainOptions {
  /// Checkpoints go here when nonempty: kernels.txt, optimizer.txt, state.txt,
  /// history.csv, validation_triplets.csv.
  std::filesystem::path checkpoint_dir;
  bool resume = false;
  /// Stop (and checkpoint) once this many batches are complete; -1 runs to the end.
  int stop_after = -1;
  std::function<void(const std::string&)> log;
};

struct TrainResult {
  KernelBank raw_bank;       // weights as trained
  KernelBank exported_bank;  // zero_mean(raw_bank)
  TrainHistory history;
  OptimizerState optimizer;
  int completed_batches = 0;
};

TrainResult train(const TrainConfig& cfg, const TrainingSet& train_set,
                  const TrainingSet& validation_set, const KernelBank& init_bank,
                  const SamplingMap& map, const TrainOptions& options = {});

}  // namespace irisnet

#endif  // IRISNET_TRAINER_HPP_
