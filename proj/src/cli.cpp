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

#include "irisnet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "irisnet/coder.hpp"
#include "irisnet/csv.hpp"
#include "irisnet/error.hpp"
#include "irisnet/eval.hpp"
#include "irisnet/iris_data.hpp"
#include "irisnet/matcher.hpp"
#include "irisnet/parallel.hpp"
#include "irisnet/pgm.hpp"
#include "irisnet/synth.hpp"
#include "irisnet/trainer.hpp"

namespace irisnet::cli {

namespace fs = std::filesystem;

fs::path contained_path(const fs::path& dir, const std::string& path) {
  fs::path out = dir;
  for (const auto& part : fs::path(path).lexically_normal().relative_path()) {
    if (part == "..") out /= "_up_";
    else if (part != ".") out /= part;
  }
  return out;
}

fs::path code_path(const fs::path& codes_dir, const std::string& image) {
  fs::path p = contained_path(codes_dir, image);
  p.replace_extension(".irc");
  return p;
}

namespace {

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  bool verbose = false;
  std::string config;
};

class Logger {
 public:
  Logger(std::ostream& err, bool verbose) : err_(err), verbose_(verbose) {}
  void info(const std::string& msg) const { err_ << msg << '\n'; }
  void detail(const std::string& msg) const {
    if (verbose_) err_ << msg << '\n';
  }

 private:
  std::ostream& err_;
  bool verbose_;
};

// Resolved configuration as `key = value` lines, logged by every command.
class Resolved {
 public:
  Resolved(std::string command, const Globals& g) : command_(std::move(command)) {
    add("seed", std::to_string(g.seed));
    add("threads", std::to_string(thread_count()));
  }
  Resolved& add(const std::string& key, const std::string& value) {
    lines_ << "  " << key << " = " << value << '\n';
    return *this;
  }
  void log(const Logger& log) const { log.info("irisnet " + command_ + "\n" + lines_.str()); }

 private:
  std::string command_;
  std::ostringstream lines_;
};

SamplingMap sampling_map_or_default(const std::string& path) {
  return path.empty() ? default_sampling_map() : load_sampling_map(path);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// --- synth ---------------------------------------------------------------------------

struct SynthArgs {
  int classes = 10;
  int images = 10;
  int first_class = 0;
  std::string out;
};

void cmd_synth(const Globals& g, const SynthArgs& a, const Logger& log) {
  SynthConfig cfg;
  cfg.classes = a.classes;
  cfg.images_per_class = a.images;
  cfg.first_class = a.first_class;
  cfg.seed = g.seed;
  Resolved("synth", g)
      .add("classes", std::to_string(a.classes))
      .add("images_per_class", std::to_string(a.images))
      .add("first_class", std::to_string(a.first_class))
      .add("out", a.out)
      .log(log);
  const auto entries = write_synthetic(generate_synthetic(cfg), a.out);
  log.detail("wrote " + std::to_string(entries.size()) + " images");
}

// --- pairs ---------------------------------------------------------------------------

struct PairsArgs {
  std::string manifest;
  std::string out;
};

void cmd_pairs(const Globals& g, const PairsArgs& a, const Logger& log) {
  Resolved("pairs", g).add("manifest", a.manifest).add("out", a.out).log(log);
  const auto manifest = load_dataset(a.manifest);
  const auto genuine = generate_genuine_pairs(manifest);
  const auto impostor = generate_impostor_pairs(manifest, g.seed);
  fs::create_directories(a.out);
  write_pairs_csv(fs::path(a.out) / "genuine.csv", to_path_pairs(manifest, genuine));
  write_pairs_csv(fs::path(a.out) / "impostor.csv", to_path_pairs(manifest, impostor));
  log.detail(std::to_string(genuine.pairs.size()) + " genuine, " +
             std::to_string(impostor.pairs.size()) + " impostor pairs");
}

// --- align ---------------------------------------------------------------------------

struct AlignArgs {
  std::string manifest;
  std::string out;
};

void cmd_align(const Globals& g, const AlignArgs& a, const Logger& log) {
  Resolved("align", g).add("manifest", a.manifest).add("out", a.out).log(log);
  const auto manifest = load_dataset(a.manifest);
  const auto& classes = manifest.classes();
  std::vector<AlignedClass> aligned(classes.size());
  parallel_for(classes.size(), [&](std::size_t c) {
    std::vector<Matrix> images;
    std::vector<BitGrid> masks;
    for (std::size_t i : classes[c].members) {
      images.push_back(manifest.load_image(i).pixels());
      masks.push_back(manifest.load_mask(i).bits());
    }
    aligned[c] = align_class(images, masks);
  });

  const fs::path out(a.out);
  fs::create_directories(out);
  std::vector<ManifestEntry> entries;
  std::ofstream alignment_log(out / "alignment.csv");
  if (!alignment_log) throw DataError("cannot write file: " + (out / "alignment.csv").string());
  alignment_log << "class,image,shift\n";
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t m = 0; m < classes[c].members.size(); ++m) {
      const ManifestEntry& src = manifest.entries()[classes[c].members[m]];
      ManifestEntry e = src;
      e.image = contained_path({}, src.image).generic_string();
      e.mask = contained_path({}, src.mask).generic_string();
      e.image_file = out / e.image;
      e.mask_file = out / e.mask;
      write_pgm(e.image_file, to_bytes(aligned[c].images[m]));
      write_pgm(e.mask_file, mask_to_bytes(aligned[c].masks[m]));
      alignment_log << src.class_id << ',' << src.image << ',' << aligned[c].alignment.shifts[m]
                    << '\n';
      entries.push_back(std::move(e));
    }
  }
  write_manifest(out / "manifest.csv", entries);
  if (!alignment_log) throw DataError("write failed: " + (out / "alignment.csv").string());
}

// --- encode --------------------------------------------------------------------------

struct EncodeArgs {
  std::string manifest;
  std::string kernels;
  std::string sampling_map;
  std::string out;
};

void cmd_encode(const Globals& g, const EncodeArgs& a, const Logger& log) {
  Resolved("encode", g)
      .add("manifest", a.manifest)
      .add("kernels", a.kernels)
      .add("sampling_map", a.sampling_map.empty() ? "(default grid)" : a.sampling_map)
      .add("out", a.out)
      .log(log);
  const auto manifest = load_dataset(a.manifest);
  const auto bank = load_kernels(a.kernels);
  const auto map = sampling_map_or_default(a.sampling_map);
  parallel_for(manifest.size(), [&](std::size_t i) {
    const IrisCode code = encode_code(manifest.load_image(i), manifest.load_mask(i), bank, map);
    write_iris_code(code_path(a.out, manifest.entries()[i].image), code);
  });
  log.detail("encoded " + std::to_string(manifest.size()) + " images");
}

// --- match ---------------------------------------------------------------------------

struct MatchArgs {
  std::vector<std::string> pairs;
  std::string codes;
  int max_shift = 0;
  std::string sampling_map;
  std::string out;
};

fs::path excluded_path(const fs::path& scores) {
  fs::path p = scores;
  p.replace_filename(scores.stem().string() + "_excluded.csv");
  return p;
}

void cmd_match(const Globals& g, const MatchArgs& a, const Logger& log) {
  Resolved("match", g)
      .add("pairs", join(a.pairs))
      .add("codes", a.codes)
      .add("max_shift", std::to_string(a.max_shift))
      .add("sampling_map", a.sampling_map.empty() ? "(default grid)" : a.sampling_map)
      .add("out", a.out)
      .log(log);
  if (a.max_shift < 0) throw DataError("--max-shift must be non-negative");
  std::vector<PathPair> pairs;
  for (const auto& file : a.pairs) {
    auto more = read_pairs_csv(file);
    pairs.insert(pairs.end(), more.begin(), more.end());
  }
  std::vector<std::string> keys;
  for (const auto& p : pairs) {
    keys.push_back(p.a);
    keys.push_back(p.b);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<IrisCode> loaded(keys.size());
  parallel_for(keys.size(), [&](std::size_t i) {
    const fs::path file = code_path(a.codes, keys[i]);
    if (!fs::exists(file)) throw DataError("missing code for " + keys[i] + ": " + file.string());
    loaded[i] = read_iris_code(file);
  });
  std::map<std::string, IrisCode> codes;
  for (std::size_t i = 0; i < keys.size(); ++i) codes.emplace(keys[i], std::move(loaded[i]));

  const auto map = sampling_map_or_default(a.sampling_map);
  const PairScores scores = score_pairs(pairs, codes, a.max_shift, map);
  write_scores_csv(a.out, scores.scored);
  write_pairs_csv(excluded_path(a.out), scores.excluded);
  log.detail(std::to_string(scores.scored.size()) + " scored, " +
             std::to_string(scores.excluded.size()) + " excluded");
}

// --- eval ----------------------------------------------------------------------------

struct EvalArgs {
  std::vector<std::string> scores;
  std::vector<std::string> excluded;
  std::string out;
};

void cmd_eval(const Globals& g, const EvalArgs& a, const Logger& log, std::ostream& out) {
  Resolved("eval", g)
      .add("scores", join(a.scores))
      .add("excluded", a.excluded.empty() ? "(none)" : join(a.excluded))
      .add("out", a.out)
      .log(log);
  PairScores all;
  for (const auto& file : a.scores) {
    auto rows = read_scores_csv(file);
    all.scored.insert(all.scored.end(), rows.begin(), rows.end());
  }
  for (const auto& file : a.excluded) {
    auto rows = read_pairs_csv(file);
    all.excluded.insert(all.excluded.end(), rows.begin(), rows.end());
  }
  const EvalReport report = evaluate(to_score_set(all));
  export_report(report, a.out);
  out << "d_prime " << csv::format_double(report.d_prime) << "\neer "
      << csv::format_double(report.eer) << '\n';
}

// --- train ---------------------------------------------------------------------------

struct TrainArgs {
  std::string train_manifest;
  std::string val_manifest;
  std::string init = "gabor";
  std::string sampling_map;
  std::string out;
  bool resume = false;
  int stop_after = -1;
  std::optional<int> batches;
  std::optional<int> batch_size;
  std::optional<int> pool_size;
  std::optional<int> validation_triplets;
  std::optional<int> validation_every;
};

void cmd_train(const Globals& g, const TrainArgs& a, const Logger& log) {
  TrainConfig cfg;
  if (!g.config.empty()) cfg = load_train_config(g.config);
  if (g.seed_given || g.config.empty()) cfg.seed = g.seed;
  if (a.batches) cfg.total_batches = *a.batches;
  if (a.batch_size) cfg.batch_size = *a.batch_size;
  if (a.pool_size) cfg.pool_size = *a.pool_size;
  if (a.validation_triplets) cfg.validation_triplets = *a.validation_triplets;
  if (a.validation_every) cfg.validation_every = *a.validation_every;
  if (cfg.total_batches < 0 || cfg.batch_size < 2 || cfg.pool_size < 0 || cfg.validation_every < 1 ||
      cfg.validation_triplets < 0) {
    throw DataError("invalid training configuration");
  }

  Resolved resolved("train", g);
  resolved.add("train_manifest", a.train_manifest)
      .add("val_manifest", a.val_manifest)
      .add("init", a.init)
      .add("sampling_map", a.sampling_map.empty() ? "(default grid)" : a.sampling_map)
      .add("out", a.out)
      .add("resume", a.resume ? "true" : "false")
      .add("stop_after", std::to_string(a.stop_after));
  std::istringstream lines(describe(cfg));
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    resolved.add(line.substr(0, eq), line.substr(eq + 3));
  }
  resolved.log(log);

  const KernelBank init = a.init == "random"  ? random_init(cfg.seed)
                          : a.init == "gabor" ? gabor_init()
                                              : load_kernels(a.init);

  const auto train_set = TrainingSet::from_manifest(load_dataset(a.train_manifest));
  const auto val_set = TrainingSet::from_manifest(load_dataset(a.val_manifest));
  const auto map = sampling_map_or_default(a.sampling_map);

  const fs::path out(a.out);
  fs::create_directories(out);
  save_kernels(init, out / "kernels_init.txt");
  TrainOptions options;
  options.checkpoint_dir = out / "checkpoint";
  options.resume = a.resume;
  options.stop_after = a.stop_after;
  options.log = [&log](const std::string& msg) { log.detail(msg); };
  const TrainResult result = train(cfg, train_set, val_set, init, map, options);

  save_kernels(result.exported_bank, out / "kernels.txt");
  save_kernels(result.raw_bank, out / "kernels_raw.txt");
  write_history_csv(out / "history.csv", result.history);
  std::ostringstream summary;
  summary << "completed batches " << result.completed_batches << ", validation loss "
          << csv::format_double(result.history.initial_validation_loss);
  if (!result.history.validation.empty()) {
    summary << " -> " << csv::format_double(result.history.validation.back().loss);
  }
  log.info(summary.str());
}

// --- kernels -------------------------------------------------------------------------

struct KernelArgs {
  std::string kernels;
  std::string out;
};

void cmd_kernels_inspect(const KernelBank& bank, std::ostream& out) {
  out << "kernel,rows,cols,sum,min,max,l2\n";
  for (std::size_t k = 0; k < bank.kernels().size(); ++k) {
    const Matrix& m = bank.kernel(k);
    double sum = 0.0;
    double l2 = 0.0;
    double lo = m.values().front();
    double hi = lo;
    for (double w : m.values()) {
      sum += w;
      l2 += w * w;
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    out << k << ',' << m.rows() << ',' << m.cols() << ',' << csv::format_double(sum) << ','
        << csv::format_double(lo) << ',' << csv::format_double(hi) << ','
        << csv::format_double(std::sqrt(l2)) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Data-driven iris codes: train, encode, match and evaluate.", "irisnet"};
  app.require_subcommand(1);
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads, 0 for all cores; never changes outputs")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_flag("-v,--verbose", g.verbose, "Progress details on stderr");
  app.add_option("--config", g.config, "Training config file (INI key = value)")->check(CLI::ExistingFile);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset with manifest");
  synth_cmd->add_option("--classes", synth.classes, "Number of classes")->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--images-per-class", synth.images, "Images per class")->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--first-class", synth.first_class, "Class numbering offset")->capture_default_str()->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  PairsArgs pairs;
  auto* pairs_cmd = app.add_subcommand("pairs", "Write genuine.csv and impostor.csv");
  pairs_cmd->add_option("--manifest", pairs.manifest, "Dataset manifest CSV")->required();
  pairs_cmd->add_option("--out", pairs.out, "Output directory")->required();

  AlignArgs align;
  auto* align_cmd = app.add_subcommand("align", "Rotation-compensate each class; writes images, masks, manifest.csv, alignment.csv");
  align_cmd->add_option("--manifest", align.manifest, "Dataset manifest CSV")->required();
  align_cmd->add_option("--out", align.out, "Output directory")->required();

  EncodeArgs encode;
  auto* encode_cmd = app.add_subcommand("encode", "Write one .irc iris code per manifest image");
  encode_cmd->add_option("--manifest", encode.manifest, "Dataset manifest CSV")->required();
  encode_cmd->add_option("--kernels", encode.kernels, "Kernel bank file")->required();
  encode_cmd->add_option("--sampling-map", encode.sampling_map, "Sampling map file (default: 8x32 grid)");
  encode_cmd->add_option("--out", encode.out, "Codes directory")->required();

  MatchArgs match;
  auto* match_cmd = app.add_subcommand("match", "Score pair lists; unscorable pairs go to <out stem>_excluded.csv");
  match_cmd->add_option("--pairs", match.pairs, "Pair CSV files")->required();
  match_cmd->add_option("--codes", match.codes, "Codes directory written by encode")->required();
  match_cmd->add_option("--max-shift", match.max_shift, "Largest lattice-column shift tried")->capture_default_str();
  match_cmd->add_option("--sampling-map", match.sampling_map, "Sampling map file (default: 8x32 grid)");
  match_cmd->add_option("--out", match.out, "Scores CSV")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "ROC, EER, d' and histograms from score files");
  eval_cmd->add_option("--scores", eval.scores, "Score CSV files")->required();
  eval_cmd->add_option("--excluded", eval.excluded, "Excluded-pair CSV files, counted in the summary");
  eval_cmd->add_option("--out", eval.out, "Report directory")->required();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a kernel bank with batch-hard triplet mining");
  train_cmd->add_option("--train-manifest", tr.train_manifest, "Training manifest")->required();
  train_cmd->add_option("--val-manifest", tr.val_manifest, "Validation manifest (disjoint classes)")->required();
  train_cmd->add_option("--init", tr.init, "random, gabor, or a kernel bank file")->capture_default_str();
  train_cmd->add_option("--sampling-map", tr.sampling_map, "Sampling map file (default: 8x32 grid)");
  train_cmd->add_option("--out", tr.out, "Output directory")->required();
  train_cmd->add_flag("--resume", tr.resume, "Continue from <out>/checkpoint");
  train_cmd->add_option("--stop-after", tr.stop_after, "Stop after this many completed batches")->capture_default_str();
  train_cmd->add_option("--batches", tr.batches, "Override total_batches");
  train_cmd->add_option("--batch-size", tr.batch_size, "Override batch_size");
  train_cmd->add_option("--pool-size", tr.pool_size, "Override pool_size");
  train_cmd->add_option("--validation-triplets", tr.validation_triplets, "Override validation_triplets");
  train_cmd->add_option("--validation-every", tr.validation_every, "Override validation_every");

  KernelArgs kargs;
  auto* kernels_cmd = app.add_subcommand("kernels", "Kernel bank utilities");
  kernels_cmd->require_subcommand(1);
  auto* heatmaps_cmd = kernels_cmd->add_subcommand("export-heatmaps", "Write kernel_<i>.pgm and kernel_<i>.csv");
  heatmaps_cmd->add_option("--kernels", kargs.kernels, "Kernel bank file")->required();
  heatmaps_cmd->add_option("--out", kargs.out, "Output directory")->required();
  auto* zero_cmd = kernels_cmd->add_subcommand("zero-mean", "Subtract each kernel's mean");
  zero_cmd->add_option("--kernels", kargs.kernels, "Kernel bank file")->required();
  zero_cmd->add_option("--out", kargs.out, "Output kernel file")->required();
  auto* gabor_cmd = kernels_cmd->add_subcommand("gabor-gen", "Write the default Gabor bank");
  gabor_cmd->add_option("--out", kargs.out, "Output kernel file")->required();
  auto* random_cmd = kernels_cmd->add_subcommand("random-gen", "Write a random bank from --seed");
  random_cmd->add_option("--out", kargs.out, "Output kernel file")->required();
  auto* inspect_cmd = kernels_cmd->add_subcommand("inspect", "Per-kernel shape and statistics as CSV");
  inspect_cmd->add_option("--kernels", kargs.kernels, "Kernel bank file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "irisnet: " << e.what() << "\n";
    return kUsage;
  }
  g.seed_given = seed_opt->count() > 0;
  set_thread_count(g.threads);
  const Logger log(err, g.verbose);

  try {
    if (*synth_cmd) cmd_synth(g, synth, log);
    else if (*pairs_cmd) cmd_pairs(g, pairs, log);
    else if (*align_cmd) cmd_align(g, align, log);
    else if (*encode_cmd) cmd_encode(g, encode, log);
    else if (*match_cmd) cmd_match(g, match, log);
    else if (*eval_cmd) cmd_eval(g, eval, log, out);
    else if (*train_cmd) cmd_train(g, tr, log);
    else if (*heatmaps_cmd) {
      Resolved("kernels export-heatmaps", g).add("kernels", kargs.kernels).add("out", kargs.out).log(log);
      export_kernel_heatmaps(load_kernels(kargs.kernels), kargs.out);
    } else if (*zero_cmd) {
      Resolved("kernels zero-mean", g).add("kernels", kargs.kernels).add("out", kargs.out).log(log);
      save_kernels(zero_mean(load_kernels(kargs.kernels)), kargs.out);
    } else if (*gabor_cmd) {
      Resolved("kernels gabor-gen", g).add("out", kargs.out).log(log);
      save_kernels(gabor_init(), kargs.out);
    } else if (*random_cmd) {
      Resolved("kernels random-gen", g).add("out", kargs.out).log(log);
      save_kernels(random_init(g.seed), kargs.out);
    } else if (*inspect_cmd) {
      Resolved("kernels inspect", g).add("kernels", kargs.kernels).log(log);
      cmd_kernels_inspect(load_kernels(kargs.kernels), out);
    }
  } catch (const NumericError& e) {
    err << "irisnet: numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const std::exception& e) {
    err << "irisnet: " << e.what() << '\n';
    return kDataFailure;
  }
  return kOk;
}

}  // namespace irisnet::cli
