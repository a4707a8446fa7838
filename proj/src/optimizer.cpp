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

#include <cmath>
#include <fstream>
#include <sstream>

#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/trainer.hpp"

namespace irisnet {

namespace {

void check_gradients(const KernelBank& bank, const GradientSet& grads) {
  if (grads.size() != bank.kernels().size()) throw DataError("gradient/bank kernel count mismatch");
  for (std::size_t k = 0; k < grads.size(); ++k) {
    if (!grads[k].same_shape(bank.kernel(k))) throw DataError("gradient/bank shape mismatch");
    for (int r = 0; r < grads[k].rows(); ++r) {
      for (int c = 0; c < grads[k].cols(); ++c) {
        if (!std::isfinite(grads[k](r, c))) {
          throw NumericError("non-finite gradient at kernel " + std::to_string(k) + " (" +
                             std::to_string(r) + "," + std::to_string(c) + ")");
        }
      }
    }
  }
}

void ensure_state(const KernelBank& bank, OptimizerState& state) {
  const std::size_t n = bank.weight_count();
  if (state.m.empty() && state.v.empty() && state.step == 0) {
    state.m.assign(n, 0.0);
    state.v.assign(n, 0.0);
  }
  if (state.m.size() != n || state.v.size() != n) {
    throw DataError("optimizer state does not match the kernel bank");
  }
}

void check_weights(const KernelBank& bank) {
  for (std::size_t k = 0; k < bank.kernels().size(); ++k) {
    for (double w : bank.kernel(k).values()) {
      if (!std::isfinite(w)) throw NumericError("update left a non-finite weight in kernel " + std::to_string(k));
    }
  }
}

}  // namespace

void adam_step(KernelBank& bank, const GradientSet& grads, OptimizerState& state,
               const OptimizerConfig& cfg) {
  check_gradients(bank, grads);
  ensure_state(bank, state);
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  std::size_t i = 0;
  for (std::size_t k = 0; k < grads.size(); ++k) {
    auto w = bank.weights(k);
    const auto& g = grads[k].values();
    for (std::size_t j = 0; j < w.size(); ++j, ++i) {
      state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g[j];
      state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g[j] * g[j];
      const double m_hat = state.m[i] / correction1;
      const double v_hat = state.v[i] / correction2;
      w[j] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
  check_weights(bank);
}

void optimizer_step(KernelBank& bank, const GradientSet& grads, OptimizerState& state,
                    const OptimizerConfig& cfg) {
  if (cfg.kind == OptimizerKind::adam) {
    adam_step(bank, grads, state, cfg);
    return;
  }
  check_gradients(bank, grads);
  ensure_state(bank, state);
  ++state.step;
  std::size_t i = 0;
  for (std::size_t k = 0; k < grads.size(); ++k) {
    auto w = bank.weights(k);
    const auto& g = grads[k].values();
    for (std::size_t j = 0; j < w.size(); ++j, ++i) {
      state.m[i] = cfg.momentum * state.m[i] + g[j];
      w[j] -= cfg.learning_rate * state.m[i];
    }
  }
  check_weights(bank);
}

// Format: `step <n>`, `size <n>`, then one `m v` line per weight.
void save_optimizer_state(const OptimizerState& state, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "step " << state.step << "\nsize " << state.m.size() << '\n';
  for (std::size_t i = 0; i < state.m.size(); ++i) {
    out << csv::format_double(state.m[i]) << ' ' << csv::format_double(state.v[i]) << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

OptimizerState load_optimizer_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  OptimizerState state;
  std::string key;
  std::string value;
  std::size_t size = 0;
  if (!(in >> key >> value) || key != "step") throw DataError(path.string() + ": missing step");
  state.step = csv::parse_int(value, path.string());
  if (!(in >> key >> value) || key != "size") throw DataError(path.string() + ": missing size");
  size = static_cast<std::size_t>(csv::parse_int(value, path.string()));
  state.m.resize(size);
  state.v.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::string m;
    std::string v;
    if (!(in >> m >> v)) throw DataError(path.string() + ": truncated optimizer state");
    state.m[i] = csv::parse_double(m, path.string());
    state.v[i] = csv::parse_double(v, path.string());
  }
  return state;
}

}  // namespace irisnet
