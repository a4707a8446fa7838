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

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/parallel.hpp"
#include "irisnet/rng.hpp"
#include "irisnet/trainer.hpp"

namespace irisnet {

// --- configuration -------------------------------------------------------------

namespace {

std::string loss_name(LossKind k) { return k == LossKind::soft_margin ? "soft_margin" : "hinge"; }

std::string optimizer_name(OptimizerKind k) {
  return k == OptimizerKind::adam ? "adam" : "sgd_momentum";
}

int positive_int(const std::string& key, const std::string& value, int min) {
  const long long v = csv::parse_int(value, key);
  if (v < min || v > std::numeric_limits<int>::max()) {
    throw DataError("config key " + key + " must be >= " + std::to_string(min));
  }
  return static_cast<int>(v);
}

}  // namespace

TrainConfig load_train_config(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw DataError("cannot parse config " + path.string() + ": " + e.what());
  }

  TrainConfig cfg;
  for (const auto& [key, node] : tree) {
    if (!node.empty()) throw DataError("config sections are not supported: [" + key + "]");
    const std::string value = node.get_value<std::string>();
    if (key == "batch_size") cfg.batch_size = positive_int(key, value, 2);
    else if (key == "pool_size") cfg.pool_size = positive_int(key, value, 0);
    else if (key == "total_batches") cfg.total_batches = positive_int(key, value, 0);
    else if (key == "validation_triplets") cfg.validation_triplets = positive_int(key, value, 0);
    else if (key == "validation_every") cfg.validation_every = positive_int(key, value, 1);
    else if (key == "checkpoint_every") cfg.checkpoint_every = positive_int(key, value, 0);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(csv::parse_int(value, key));
    else if (key == "loss") {
      if (value == "soft_margin") cfg.loss.kind = LossKind::soft_margin;
      else if (value == "hinge") cfg.loss.kind = LossKind::hinge;
      else throw DataError("config loss must be soft_margin or hinge");
    } else if (key == "hinge_alpha") {
      cfg.loss.alpha = csv::parse_double(value, key);
      if (cfg.loss.alpha < 0.0) throw DataError("hinge_alpha must be non-negative");
    } else if (key == "optimizer") {
      if (value == "adam") cfg.optimizer.kind = OptimizerKind::adam;
      else if (value == "sgd_momentum") cfg.optimizer.kind = OptimizerKind::sgd_momentum;
      else throw DataError("config optimizer must be adam or sgd_momentum");
    } else if (key == "learning_rate") cfg.optimizer.learning_rate = csv::parse_double(value, key);
    else if (key == "beta1") cfg.optimizer.beta1 = csv::parse_double(value, key);
    else if (key == "beta2") cfg.optimizer.beta2 = csv::parse_double(value, key);
    else if (key == "epsilon") cfg.optimizer.epsilon = csv::parse_double(value, key);
    else if (key == "momentum") cfg.optimizer.momentum = csv::parse_double(value, key);
    else throw DataError("unknown config key '" + key + "' in " + path.string());
  }
  return cfg;
}

std::string describe(const TrainConfig& cfg) {
  std::ostringstream out;
  out << "batch_size = " << cfg.batch_size << '\n'
      << "pool_size = " << cfg.effective_pool_size() << '\n'
      << "total_batches = " << cfg.total_batches << '\n'
      << "validation_triplets = " << cfg.validation_triplets << '\n'
      << "validation_every = " << cfg.validation_every << '\n'
      << "checkpoint_every = " << cfg.checkpoint_every << '\n'
      << "seed = " << cfg.seed << '\n'
      << "loss = " << loss_name(cfg.loss.kind) << '\n'
      << "hinge_alpha = " << csv::format_double(cfg.loss.alpha) << '\n'
      << "optimizer = " << optimizer_name(cfg.optimizer.kind) << '\n'
      << "learning_rate = " << csv::format_double(cfg.optimizer.learning_rate) << '\n'
      << "beta1 = " << csv::format_double(cfg.optimizer.beta1) << '\n'
      << "beta2 = " << csv::format_double(cfg.optimizer.beta2) << '\n'
      << "epsilon = " << csv::format_double(cfg.optimizer.epsilon) << '\n'
      << "momentum = " << csv::format_double(cfg.optimizer.momentum) << '\n';
  return out.str();
}

// --- history ----------------------------------------------------------------------

void write_history_csv(const std::filesystem::path& path, const TrainHistory& history) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "batch,train_loss,val_loss\n";
  out << "0,," << csv::format_double(history.initial_validation_loss) << '\n';
  std::size_t v = 0;
  for (std::size_t b = 0; b < history.train_loss.size(); ++b) {
    out << b + 1 << ',' << csv::format_double(history.train_loss[b]) << ',';
    if (v < history.validation.size() &&
        history.validation[v].batch == static_cast<int>(b + 1)) {
      out << csv::format_double(history.validation[v++].loss);
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

TrainHistory read_history_csv(const std::filesystem::path& path) {
  TrainHistory h;
  const auto rows = csv::read(path, "batch,train_loss,val_loss");
  if (rows.empty()) throw DataError(path.string() + ": missing initial validation row");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 3 || csv::parse_int(row[0], path.string()) != static_cast<long long>(i)) {
      throw DataError(path.string() + ": malformed history row " + std::to_string(i));
    }
    if (i == 0) {
      h.initial_validation_loss = csv::parse_double(row[2], path.string());
      continue;
    }
    h.train_loss.push_back(csv::parse_double(row[1], path.string()));
    h.seconds.push_back(0.0);
    h.skipped.push_back(0);
    if (!row[2].empty()) {
      h.validation.push_back({static_cast<int>(i), csv::parse_double(row[2], path.string())});
    }
  }
  return h;
}

// --- training loop -----------------------------------------------------------------

namespace {

std::string config_fingerprint(const TrainConfig& cfg) {
  TrainConfig c = cfg;
  c.total_batches = 0;
  c.checkpoint_every = 0;
  return describe(c);
}

struct Checkpoint {
  std::filesystem::path dir;

  bool exists() const { return std::filesystem::exists(dir / "state.txt"); }

  void write(const TrainConfig& cfg, const TrainingSet& validation_set,
             const std::vector<Triplet>& validation, const KernelBank& bank,
             const OptimizerState& optimizer, const TrainHistory& history, int completed) const {
    std::filesystem::create_directories(dir);
    save_kernels(bank, dir / "kernels.txt");
    save_optimizer_state(optimizer, dir / "optimizer.txt");
    write_history_csv(dir / "history.csv", history);
    save_triplets(dir / "validation_triplets.csv", validation_set, validation);
    {
      std::ofstream out(dir / "config.txt");
      out << config_fingerprint(cfg);
    }
    std::ofstream out(dir / "state.txt");
    out << "completed_batches " << completed << '\n';
    if (!out) throw DataError("cannot write checkpoint in " + dir.string());
  }

  int completed_batches() const {
    std::ifstream in(dir / "state.txt");
    std::string key;
    std::string value;
    if (!(in >> key >> value) || key != "completed_batches") {
      throw DataError("malformed checkpoint state in " + dir.string());
    }
    return static_cast<int>(csv::parse_int(value, (dir / "state.txt").string()));
  }

  void check_config(const TrainConfig& cfg) const {
    std::ifstream in(dir / "config.txt");
    std::stringstream saved;
    saved << in.rdbuf();
    if (saved.str() != config_fingerprint(cfg)) {
      throw DataError("checkpoint in " + dir.string() + " was written with a different config");
    }
  }
};

void check_disjoint(const TrainingSet& a, const TrainingSet& b) {
  const std::set<std::string> train_ids(a.class_ids().begin(), a.class_ids().end());
  for (const auto& id : b.class_ids()) {
    if (train_ids.count(id)) {
      throw DataError("class " + id + " appears in both training and validation data");
    }
  }
}

struct TripletStep {
  std::optional<GradientSet> grads;
  double loss = 0.0;
};

}  // namespace

TrainResult train(const TrainConfig& cfg, const TrainingSet& train_set,
                  const TrainingSet& validation_set, const KernelBank& init_bank,
                  const SamplingMap& map, const TrainOptions& options) {
  if (cfg.batch_size < 2) throw DataError("batch_size must be at least 2");
  if (cfg.validation_every < 1) throw DataError("validation_every must be positive");
  check_disjoint(train_set, validation_set);
  const auto log = [&](const std::string& msg) {
    if (options.log) options.log(msg);
  };

  const Checkpoint checkpoint{options.checkpoint_dir};
  const bool use_checkpoints = !options.checkpoint_dir.empty();

  TrainResult result{init_bank, init_bank, {}, {}, 0};
  KernelBank& bank = result.raw_bank;
  std::vector<Triplet> validation;

  if (use_checkpoints && options.resume && checkpoint.exists()) {
    checkpoint.check_config(cfg);
    bank = load_kernels(checkpoint.dir / "kernels.txt");
    result.optimizer = load_optimizer_state(checkpoint.dir / "optimizer.txt");
    result.history = read_history_csv(checkpoint.dir / "history.csv");
    validation = load_triplets(checkpoint.dir / "validation_triplets.csv", validation_set, map);
    result.completed_batches = checkpoint.completed_batches();
    if (static_cast<std::size_t>(result.completed_batches) != result.history.train_loss.size()) {
      throw DataError("checkpoint history does not match its batch counter");
    }
    log("resumed from " + checkpoint.dir.string() + " at batch " +
        std::to_string(result.completed_batches));
  } else {
    validation = build_validation_set(validation_set, cfg.validation_triplets,
                                      mix_keys(cfg.seed, 0x76616cULL), map);
    result.history.initial_validation_loss =
        validation_loss(bank, validation_set, validation, map, cfg.loss);
    log("initial validation loss " + csv::format_double(result.history.initial_validation_loss));
  }

  const int pool = cfg.effective_pool_size();
  const int end = options.stop_after >= 0 ? std::min(options.stop_after, cfg.total_batches)
                                          : cfg.total_batches;
  for (int b = result.completed_batches; b < end; ++b) {
    const auto started = std::chrono::steady_clock::now();
    const MinedBatch batch = batch_hard_mine(bank, train_set, map, cfg.batch_size, pool, cfg.seed,
                                             static_cast<std::uint64_t>(b));

    std::vector<TripletStep> steps(batch.triplets.size());
    parallel_for(batch.triplets.size(), [&](std::size_t i) {
      const Triplet& t = batch.triplets[i].triplet;
      try {
        const ForwardPass pass = forward(bank, train_set, t, map, cfg.loss);
        steps[i].loss = pass.loss;
        steps[i].grads = backward(pass, bank, train_set, t, map, cfg.loss);
      } catch (const DegenerateTriplet&) {
        steps[i].grads.reset();
      }
    });

    // Reduction in triplet order keeps results independent of thread count.
    GradientSet grads = zero_gradients(bank);
    double loss_sum = 0.0;
    int used = 0;
    for (const auto& s : steps) {
      if (!s.grads) continue;
      ++used;
      loss_sum += s.loss;
      for (std::size_t k = 0; k < grads.size(); ++k) {
        auto& acc = grads[k].values();
        const auto& g = (*s.grads)[k].values();
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += g[j];
      }
    }
    const int skipped = static_cast<int>(steps.size()) - used;
    if (skipped > 0) log("batch " + std::to_string(b + 1) + ": skipped " + std::to_string(skipped) + " degenerate triplets");

    double batch_loss = std::numeric_limits<double>::quiet_NaN();
    if (used > 0) {
      for (auto& g : grads) {
        for (double& v : g.values()) v /= used;
      }
      batch_loss = loss_sum / used;
      optimizer_step(bank, grads, result.optimizer, cfg.optimizer);
    }

    result.history.train_loss.push_back(batch_loss);
    result.history.skipped.push_back(skipped);
    result.completed_batches = b + 1;
    if (result.completed_batches % cfg.validation_every == 0 ||
        result.completed_batches == cfg.total_batches) {
      const double vl = validation_loss(bank, validation_set, validation, map, cfg.loss);
      result.history.validation.push_back({result.completed_batches, vl});
      log("batch " + std::to_string(result.completed_batches) + " train " +
          csv::format_double(batch_loss) + " validation " + csv::format_double(vl));
    }
    result.history.seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());

    if (use_checkpoints && cfg.checkpoint_every > 0 &&
        result.completed_batches % cfg.checkpoint_every == 0) {
      checkpoint.write(cfg, validation_set, validation, bank, result.optimizer, result.history,
                       result.completed_batches);
    }
  }

  if (use_checkpoints) {
    checkpoint.write(cfg, validation_set, validation, bank, result.optimizer, result.history,
                     result.completed_batches);
  }
  result.exported_bank = zero_mean(bank);
  return result;
}

}  // namespace irisnet
