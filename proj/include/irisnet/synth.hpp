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

// Synthetic normalized-iris data for desk-scale experiments.
//
// Each class owns a band-limited random texture. Every image of a class is
// that texture circularly shifted by a few columns, overlaid with a smooth
// per-image illumination field, a fine per-image distractor texture and
// pixel noise, and partially covered by eyelids at the top and bottom rows.
// Identity lives in a coarser band than the distractor, so a filter bank has
// to learn frequency selectivity to separate classes well.

#ifndef IRISNET_SYNTH_HPP_
#define IRISNET_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "irisnet/iris_data.hpp"
#include "irisnet/trainer.hpp"

namespace irisnet {

struct SynthConfig {
  int classes = 10;
  int images_per_class = 10;
  std::uint64_t seed = 0;
  int first_class = 0;  // class numbering offset; distinct offsets give distinct classes

  int max_shift = 3;               // columns, either direction
  double noise_sigma = 0.02;
  double min_occlusion = 0.10;     // fraction of rows covered by eyelids
  double max_occlusion = 0.30;

  double texture_contrast = 0.14;  // std of the class texture
  double texture_sigma_row = 2.0;  // band-pass inner blur
  double texture_sigma_col = 6.0;
  double texture_outer_scale = 3.0;  // outer blur = inner * scale
  double illumination = 0.04;        // std of the per-image illumination field
  double illumination_sigma_row = 6.0;
  double illumination_sigma_col = 12.0;
  double distractor = 0.10;          // std of a per-image fine-grained texture
  double distractor_sigma = 0.6;     // its blur, both axes
};

struct SynthSample {
  std::string class_id;
  EyeSide side = EyeSide::unknown;
  int index = 0;
  Grid<std::uint8_t> image;
  BitGrid mask;
  int shift = 0;  // applied texture shift, for diagnostics
};

/// Deterministic in the config; class k is identical whatever the other
/// classes generated alongside it.
std::vector<SynthSample> generate_synthetic(const SynthConfig& cfg);

/// Relative paths used for a sample inside an output directory.
std::string synth_image_path(const SynthSample& s);
std::string synth_mask_path(const SynthSample& s);

/// Writes PGMs and `manifest.csv` under dir; returns the manifest entries.
std::vector<ManifestEntry> write_synthetic(const std::vector<SynthSample>& samples,
                                           const std::filesystem::path& dir);

/// In-memory training set with the same keys write_synthetic would use.
TrainingSet to_training_set(const std::vector<SynthSample>& samples);

}  // namespace irisnet

#endif  // IRISNET_SYNTH_HPP_
