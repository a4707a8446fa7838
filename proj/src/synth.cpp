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

#include "irisnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "irisnet/error.hpp"
#include "irisnet/parallel.hpp"
#include "irisnet/pgm.hpp"
#include "irisnet/rng.hpp"

namespace irisnet {

namespace {

std::vector<double> gaussian_taps(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

// Separable Gaussian blur, circular on both axes.
Matrix blur(const Matrix& in, double sigma_row, double sigma_col) {
  const int h = in.rows();
  const int w = in.cols();
  const auto tc = gaussian_taps(sigma_col);
  const auto tr = gaussian_taps(sigma_row);
  const int rc = static_cast<int>(tc.size() / 2);
  const int rr = static_cast<int>(tr.size() / 2);
  Matrix tmp(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -rc; i <= rc; ++i) acc += tc[static_cast<std::size_t>(i + rc)] * in(r, ((c + i) % w + w) % w);
      tmp(r, c) = acc;
    }
  }
  Matrix out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -rr; i <= rr; ++i) acc += tr[static_cast<std::size_t>(i + rr)] * tmp(((r + i) % h + h) % h, c);
      out(r, c) = acc;
    }
  }
  return out;
}

void standardize(Matrix& m, double target_std) {
  double sum = 0.0;
  for (double v : m.values()) sum += v;
  const double mean = sum / static_cast<double>(m.size());
  double ss = 0.0;
  for (double v : m.values()) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(m.size()));
  for (double& v : m.values()) v = sd > 0.0 ? (v - mean) / sd * target_std : 0.0;
}

Matrix white_noise(Rng& rng) {
  Matrix m(kIrisRows, kIrisCols);
  for (double& v : m.values()) v = rng.normal();
  return m;
}

std::string class_name(int k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%05d", k);
  return buf;
}

}  // namespace

std::vector<SynthSample> generate_synthetic(const SynthConfig& cfg) {
  if (cfg.classes < 1 || cfg.images_per_class < 1) {
    throw DataError("synthetic generation needs at least one class and one image per class");
  }
  const std::size_t per_class = static_cast<std::size_t>(cfg.images_per_class);
  std::vector<SynthSample> samples(static_cast<std::size_t>(cfg.classes) * per_class);

  parallel_for(static_cast<std::size_t>(cfg.classes), [&](std::size_t ci) {
    const int k = cfg.first_class + static_cast<int>(ci);
    const std::uint64_t class_key = mix_keys(cfg.seed, static_cast<std::uint64_t>(k));
    Rng texture_rng(class_key, 0);
    const Matrix noise = white_noise(texture_rng);
    Matrix texture = blur(noise, cfg.texture_sigma_row, cfg.texture_sigma_col);
    const Matrix outer = blur(noise, cfg.texture_sigma_row * cfg.texture_outer_scale,
                              cfg.texture_sigma_col * cfg.texture_outer_scale);
    for (std::size_t i = 0; i < texture.size(); ++i) texture.values()[i] -= outer.values()[i];
    standardize(texture, cfg.texture_contrast);

    for (std::size_t n = 0; n < per_class; ++n) {
      Rng rng(class_key, 1 + n);
      SynthSample& s = samples[ci * per_class + n];
      s.class_id = class_name(k);
      s.side = (k % 2 == 0) ? EyeSide::left : EyeSide::right;
      s.index = static_cast<int>(n);
      s.shift = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * cfg.max_shift + 1))) -
                cfg.max_shift;

      Matrix nuisance = blur(white_noise(rng), cfg.illumination_sigma_row, cfg.illumination_sigma_col);
      standardize(nuisance, cfg.illumination);
      if (cfg.distractor > 0.0) {
        Matrix distractor = blur(white_noise(rng), cfg.distractor_sigma, cfg.distractor_sigma);
        standardize(distractor, cfg.distractor);
        for (std::size_t i = 0; i < distractor.size(); ++i) nuisance.values()[i] += distractor.values()[i];
      }
      const Matrix shifted = shift_cols(texture, s.shift);

      const int min_rows = static_cast<int>(std::ceil(cfg.min_occlusion * kIrisRows));
      const int max_rows = static_cast<int>(std::floor(cfg.max_occlusion * kIrisRows));
      const int occluded = min_rows + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_rows - min_rows + 1)));
      const int top = static_cast<int>(rng.below(static_cast<std::uint64_t>(occluded + 1)));
      const int bottom_start = kIrisRows - (occluded - top);

      Matrix pixels(kIrisRows, kIrisCols);
      s.mask = BitGrid(kIrisRows, kIrisCols, 1);
      for (int r = 0; r < kIrisRows; ++r) {
        const bool eyelid = r < top || r >= bottom_start;
        for (int c = 0; c < kIrisCols; ++c) {
          double v = 0.5 + shifted(r, c) + nuisance(r, c) + cfg.noise_sigma * rng.normal();
          if (eyelid) {
            // Flat mid-grey plus pixel noise: no structure shared across images.
            v = 0.5 + cfg.noise_sigma * rng.normal();
            s.mask(r, c) = 0;
          }
          pixels(r, c) = std::clamp(v, 0.0, 1.0);
        }
      }
      s.image = to_bytes(pixels);
    }
  });
  return samples;
}

std::string synth_image_path(const SynthSample& s) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", s.index);
  return "images/" + s.class_id + "/" + buf + ".pgm";
}

std::string synth_mask_path(const SynthSample& s) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", s.index);
  return "masks/" + s.class_id + "/" + buf + ".pgm";
}

std::vector<ManifestEntry> write_synthetic(const std::vector<SynthSample>& samples,
                                           const std::filesystem::path& dir) {
  std::vector<ManifestEntry> entries;
  entries.reserve(samples.size());
  for (const auto& s : samples) {
    ManifestEntry e;
    e.class_id = s.class_id;
    e.side = s.side;
    e.image = synth_image_path(s);
    e.mask = synth_mask_path(s);
    e.image_file = dir / e.image;
    e.mask_file = dir / e.mask;
    write_pgm(e.image_file, s.image);
    write_pgm(e.mask_file, mask_to_bytes(s.mask));
    entries.push_back(std::move(e));
  }
  write_manifest(dir / "manifest.csv", entries);
  return entries;
}

TrainingSet to_training_set(const std::vector<SynthSample>& samples) {
  std::vector<TrainingSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    out.push_back({synth_image_path(s), s.class_id, NormalizedIris::from_bytes(s.image).pixels(), s.mask});
  }
  return TrainingSet(std::move(out));
}

}  // namespace irisnet
