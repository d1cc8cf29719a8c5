// Copyright 2026 The gciforge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line pipeline: synth -> annotate -> train -> detect -> eval.

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "gciforge/dataset.hpp"
#include "gciforge/decode.hpp"
#include "gciforge/egg.hpp"
#include "gciforge/io_util.hpp"
#include "gciforge/metrics.hpp"
#include "gciforge/models.hpp"
#include "gciforge/resample.hpp"
#include "gciforge/rng.hpp"
#include "gciforge/signal_ops.hpp"
#include "gciforge/synth.hpp"
#include "gciforge/wav_io.hpp"
#include "gciforge/zff.hpp"

namespace fs = std::filesystem;
using namespace gciforge;

namespace {

constexpr std::uint64_t kDefaultSeed = 7;

// Deterministic per-index parallel map: results land by index regardless
// of scheduling.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::min(jobs, n); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Polarity parse_polarity(const std::string& s) {
  if (s == "auto") return Polarity::Auto;
  if (s == "keep") return Polarity::Keep;
  if (s == "flip") return Polarity::Flip;
  throw CLI::ValidationError("--polarity", "must be auto, keep or flip");
}

struct PreparedRecording {
  RepresentationSet reps;
  GciMarks marks;
};

PreparedRecording prepare_recording(const ManifestEntry& entry, Polarity polarity,
                                    bool with_marks) {
  const WavContents wav = read_wav(entry.wav_path);
  const Waveform prepared = prepare_speech(wav.speech, polarity);
  PreparedRecording rec;
  rec.reps = make_representations(prepared);
  if (with_marks) rec.marks = read_marks(entry.marks_path);
  return rec;
}

std::vector<ManifestEntry> filter_by_ids(const std::vector<ManifestEntry>& entries,
                                         const std::vector<std::string>& ids) {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries) {
    if (std::find(ids.begin(), ids.end(), e.id) != ids.end()) out.push_back(e);
  }
  return out;
}

FrameDataset build_dataset(const std::vector<ManifestEntry>& entries,
                           Polarity polarity, int jobs) {
  std::vector<FrameDataset> parts(entries.size());
  parallel_for(static_cast<int>(entries.size()), jobs, [&](int i) {
    const PreparedRecording rec = prepare_recording(entries[i], polarity, true);
    parts[i] = frame_and_label(rec.reps, rec.marks, entries[i].id);
  });
  FrameDataset all;
  for (auto& p : parts) all.append(p);
  return all;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  int n = 80;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string mix;
  double duration = 0.8;
};

int run_synth(const SynthArgs& args) {
  std::vector<std::string> mix;
  if (!args.mix.empty()) {
    std::istringstream ss(args.mix);
    std::string label;
    while (std::getline(ss, label, ',')) {
      if (!label.empty()) mix.push_back(label);
    }
  }
  const auto entries = gen_corpus(args.n, mix, args.seed, args.out, args.duration);
  std::cout << "wrote " << entries.size() << " recordings to " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// annotate

struct AnnotateArgs {
  std::string manifest;
  std::string out;
  std::string polarity = "auto";
  int jobs = 1;
};

int run_annotate(const AnnotateArgs& args) {
  const auto entries = read_manifest(args.manifest);
  const Polarity polarity = parse_polarity(args.polarity);

  fs::create_directories(fs::path(args.out) / "marks");
  std::vector<ManifestEntry> annotated = entries;
  parallel_for(static_cast<int>(entries.size()), args.jobs, [&](int i) {
    const ManifestEntry& e = entries[i];
    const WavContents wav = read_wav(e.wav_path);
    if (!wav.egg) throw std::runtime_error("no EGG channel in " + e.wav_path);
    const Waveform speech = prepare_speech(wav.speech, polarity);
    Waveform egg = *wav.egg;
    if (egg.sample_rate_hz != kPipelineRateHz) {
      egg.samples = resample(egg.samples, egg.sample_rate_hz, kPipelineRateHz);
      egg.sample_rate_hz = kPipelineRateHz;
    }
    if (egg.samples.size() > speech.samples.size()) {
      egg.samples.conservativeResize(speech.samples.size());
    } else if (egg.samples.size() < speech.samples.size()) {
      Signal padded = Signal::Zero(speech.samples.size());
      padded.head(egg.samples.size()) = egg.samples;
      egg.samples = std::move(padded);
    }
    const GciMarks marks = annotate(speech, egg);
    const std::string rel = "marks/" + e.id + ".marks";
    write_marks((fs::path(args.out) / rel).string(), marks);
    annotated[i].marks_path = rel;
    annotated[i].wav_path = fs::absolute(e.wav_path).string();
  });
  const std::string manifest_out = (fs::path(args.out) / "manifest.tsv").string();
  write_manifest(manifest_out, annotated);
  std::cout << "annotated " << annotated.size() << " recordings; manifest at "
            << manifest_out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string manifest;
  std::string out;
  std::uint64_t seed = kDefaultSeed;
  int epochs = 30;
  int batch = 256;
  double lr = 1e-4;
  double pos_weight = 1.0;
  double train_frac = 0.675;
  double val_frac = 0.10;
  std::string only = "all";
  std::string polarity = "auto";
  int jobs = 1;
};

void write_loss_log(const std::string& path, const std::vector<EpochLog>& log) {
  std::ostringstream out;
  out << "epoch,train_bce,val_bce\n";
  for (const auto& e : log) {
    char line[96];
    std::snprintf(line, sizeof line, "%d,%.6f,%.6f\n", e.epoch, e.train_bce, e.val_bce);
    out << line;
  }
  write_file_atomic(path, out.str());
}

int run_train(const TrainArgs& args) {
  const auto entries = read_manifest(args.manifest);
  const Polarity polarity = parse_polarity(args.polarity);
  fs::create_directories(args.out);

  std::vector<std::string> ids;
  for (const auto& e : entries) ids.push_back(e.id);
  const CorpusSplit split = split_corpus(ids, args.train_frac, args.val_frac, args.seed);
  write_split((fs::path(args.out) / "split.tsv").string(), split);

  std::cout << "split: " << split.train.size() << " train / " << split.val.size()
            << " val / " << split.test.size() << " test\n";

  const FrameDataset train_ds =
      build_dataset(filter_by_ids(entries, split.train), polarity, args.jobs);
  const FrameDataset val_ds =
      build_dataset(filter_by_ids(entries, split.val), polarity, args.jobs);
  std::cout << "frames: " << train_ds.n_frames() << " train / " << val_ds.n_frames()
            << " val (positives " << train_ds.labels.sum() << " / "
            << val_ds.labels.sum() << ")\n";

  const Rng root(args.seed);
  auto options_for = [&](int model_index) {
    TrainOptions o;
    o.batch_size = args.batch;
    o.epochs = args.epochs;
    o.lr = args.lr;
    o.positive_weight = args.pos_weight;
    o.seed = root.split(static_cast<std::uint64_t>(model_index)).seed();
    return o;
  };

  const std::array<Representation, 4> reps = {
      Representation::LpfS, Representation::LpfLpr, Representation::PcLpfS,
      Representation::PcLpfLpr};

  auto wants = [&](const std::string& what) {
    return args.only == "all" || args.only == what;
  };

  for (int m = 0; m < 4; ++m) {
    const std::string name = "model" + std::to_string(m + 1);
    if (!wants(name)) continue;
    const FrameSet train_set = select_representation(train_ds, reps[m]);
    const FrameSet val_set = select_representation(val_ds, reps[m]);
    const TrainResult result =
        train_single_column(reps[m], train_set, val_set, options_for(m + 1));
    save_checkpoint((fs::path(args.out) / (name + ".gcn")).string(), result.checkpoint);
    write_loss_log((fs::path(args.out) / ("loss_" + name + ".csv")).string(), result.log);
    std::cout << name << " (" << to_string(reps[m]) << "): best val BCE "
              << result.best_val_bce << " at epoch " << result.best_epoch << " ("
              << result.log.size() << " epochs)\n";
  }

  if (wants("joint")) {
    const Checkpoint model3 =
        load_checkpoint((fs::path(args.out) / "model3.gcn").string());
    const Checkpoint model4 =
        load_checkpoint((fs::path(args.out) / "model4.gcn").string());
    const TrainResult result = train_joint(
        model3, model4, select_representation(train_ds, Representation::PcLpfS),
        select_representation(train_ds, Representation::PcLpfLpr),
        select_representation(val_ds, Representation::PcLpfS),
        select_representation(val_ds, Representation::PcLpfLpr), options_for(5));
    save_checkpoint((fs::path(args.out) / "joint.gcn").string(), result.checkpoint);
    write_loss_log((fs::path(args.out) / "loss_joint.csv").string(), result.log);
    std::cout << "joint: best val BCE " << result.best_val_bce << " at epoch "
              << result.best_epoch << " (" << result.log.size() << " epochs)\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// detect

struct DetectArgs {
  std::string manifest;
  std::string ckpt;
  std::string out;
  std::string detector = "proposed";
  std::string split = "all";
  std::string fusion = "product";
  double threshold = 0.1;
  bool merge_adjacent = false;
  bool dump_probs = false;
  std::string polarity = "auto";
  int jobs = 1;
};

int run_detect(const DetectArgs& args) {
  auto entries = read_manifest(args.manifest);
  if (args.split != "all") {
    const CorpusSplit split = read_split((fs::path(args.ckpt) / "split.tsv").string());
    const std::vector<std::string>* ids = nullptr;
    if (args.split == "train") ids = &split.train;
    else if (args.split == "val") ids = &split.val;
    else if (args.split == "test") ids = &split.test;
    else throw std::runtime_error("unknown --split value: " + args.split);
    entries = filter_by_ids(entries, *ids);
  }
  const Polarity polarity = parse_polarity(args.polarity);
  fs::create_directories(args.out);
  if (args.dump_probs) fs::create_directories(fs::path(args.out) / "probs");

  const FusionRule rule =
      args.fusion == "max" ? FusionRule::Max : FusionRule::LikelihoodProduct;
  DecodeConfig decode_config;
  decode_config.threshold = args.threshold;
  decode_config.merge_adjacent = args.merge_adjacent;

  auto ckpt_path = [&](const std::string& stem) {
    const fs::path p = fs::path(args.ckpt) / (stem + ".gcn");
    if (!fs::exists(p)) {
      throw std::runtime_error("missing checkpoint: " + p.string());
    }
    return p.string();
  };

  // Per-thread model instances: forward passes mutate layer caches.
  const int jobs = std::max(1, args.jobs);
  std::vector<std::unique_ptr<FinalModel>> final_models;
  std::vector<std::unique_ptr<nn::Sequential>> column_models;
  const bool is_column = args.detector.rfind("model", 0) == 0;
  if (args.detector == "proposed") {
    const Checkpoint m1 = load_checkpoint(ckpt_path("model1"));
    const Checkpoint joint = load_checkpoint(ckpt_path("joint"));
    for (int j = 0; j < jobs; ++j) {
      final_models.push_back(
          std::make_unique<FinalModel>(make_final_model(m1, joint, rule)));
    }
  } else if (is_column) {
    const Checkpoint ckpt = load_checkpoint(ckpt_path(args.detector));
    for (int j = 0; j < jobs; ++j) {
      column_models.push_back(
          std::make_unique<nn::Sequential>(column_from_checkpoint(ckpt)));
    }
  } else if (args.detector != "zff") {
    throw std::runtime_error("unknown detector: " + args.detector);
  }

  std::atomic<int> worker_counter{0};
  std::vector<int> thread_slot(entries.size(), 0);
  std::mutex slot_mutex;
  std::map<std::thread::id, int> slot_of;
  auto my_slot = [&]() {
    std::lock_guard<std::mutex> lock(slot_mutex);
    auto [it, inserted] = slot_of.emplace(std::this_thread::get_id(), 0);
    if (inserted) it->second = worker_counter.fetch_add(1) % jobs;
    return it->second;
  };

  parallel_for(static_cast<int>(entries.size()), jobs, [&](int i) {
    const ManifestEntry& e = entries[i];
    GciMarks marks;
    std::string probs_text;

    if (args.detector == "zff") {
      const WavContents wav = read_wav(e.wav_path);
      const Waveform prepared = prepare_speech(wav.speech, polarity);
      marks = zff_epochs(prepared).marks;
    } else {
      const PreparedRecording rec = prepare_recording(e, polarity, false);
      Eigen::ArrayXd probs;
      if (args.detector == "proposed") {
        FinalModel& model = *final_models[my_slot()];
        const FramePredictions pred = predict_frame_predictions(model, rec.reps);
        probs = pred.p_fused;
        if (args.dump_probs) {
          std::ostringstream out;
          out << "frame\tp_model1\tp_joint\tp_fused\n";
          for (Eigen::Index f = 0; f < probs.size(); ++f) {
            char line[128];
            std::snprintf(line, sizeof line, "%ld\t%.6f\t%.6f\t%.6f\n",
                          static_cast<long>(f), pred.p_model1[f], pred.p_joint[f],
                          pred.p_fused[f]);
            out << line;
          }
          probs_text = out.str();
        }
      } else {
        nn::Sequential& column = *column_models[my_slot()];
        const Representation r =
            args.detector == "model1" ? Representation::LpfS
            : args.detector == "model2" ? Representation::LpfLpr
            : args.detector == "model3" ? Representation::PcLpfS
                                        : Representation::PcLpfLpr;
        const FrameDataset ds =
            frame_and_label(rec.reps, GciMarks{{}, MarkSource::Detector});
        probs = predict_probs(column, ds.frames[static_cast<int>(r)]);
        if (args.dump_probs) {
          std::ostringstream out;
          out << "frame\tp\n";
          for (Eigen::Index f = 0; f < probs.size(); ++f) {
            char line[64];
            std::snprintf(line, sizeof line, "%ld\t%.6f\n", static_cast<long>(f),
                          probs[f]);
            out << line;
          }
          probs_text = out.str();
        }
      }
      const Eigen::ArrayXi classified = classify_frames(probs, decode_config.threshold);
      marks = decode_gci(classified, rec.reps.get(decode_config.peak_signal),
                         decode_config);
    }

    write_marks((fs::path(args.out) / (e.id + ".marks")).string(), marks);
    if (!probs_text.empty()) {
      write_file_atomic((fs::path(args.out) / "probs" / (e.id + ".tsv")).string(),
                        probs_text);
    }
  });

  std::cout << "detected " << entries.size() << " recordings with " << args.detector
            << " -> " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string manifest;
  std::vector<std::string> dets;  // NAME=DIR
  std::string out;
  bool per_disorder = false;
};

int run_eval(const EvalArgs& args) {
  const auto entries = read_manifest(args.manifest);

  std::vector<std::pair<std::string, EvalReport>> rows;
  std::ostringstream machine;

  for (const std::string& spec : args.dets) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--dets expects NAME=DIR, got " + spec);
    }
    const std::string name = spec.substr(0, eq);
    const fs::path dir = spec.substr(eq + 1);

    std::vector<EvalReport> reports;
    std::map<std::string, std::vector<EvalReport>> by_label;
    std::ostringstream overlay;
    for (const auto& e : entries) {
      const fs::path det_path = dir / (e.id + ".marks");
      if (!fs::exists(det_path)) continue;
      const GciMarks refs = read_marks(e.marks_path);
      const GciMarks dets = read_marks(det_path.string());
      if (refs.size() < 2) continue;
      const EvalReport report = compute_metrics(refs, dets, kPipelineRateHz);
      reports.push_back(report);
      by_label[e.disorder_label].push_back(report);
      for (int p : refs.positions) overlay << e.id << "\tref\t" << p << "\n";
      for (int p : dets.positions) overlay << e.id << "\tdet\t" << p << "\n";
    }
    if (reports.empty()) {
      throw std::runtime_error("no detections found for " + name + " under " +
                               dir.string());
    }
    const EvalReport merged = merge_reports(reports);
    rows.emplace_back(name, merged);
    machine << name << ".idr=" << merged.idr << "\n";
    machine << name << ".mr=" << merged.mr << "\n";
    machine << name << ".far=" << merged.far << "\n";
    machine << name << ".ida_ms=" << merged.ida_ms << "\n";
    machine << name << ".n_ref=" << merged.n_ref << "\n";
    machine << name << ".n_det=" << merged.n_det << "\n";
    machine << name << ".n_recordings=" << reports.size() << "\n";

    if (args.per_disorder) {
      for (const auto& [label, label_reports] : by_label) {
        rows.emplace_back(name + ":" + label, merge_reports(label_reports));
      }
    }
    if (!args.out.empty()) {
      fs::create_directories(args.out);
      write_file_atomic((fs::path(args.out) / ("overlay_" + name + ".tsv")).string(),
                        overlay.str());
    }
  }

  const std::string table = format_report(rows);
  std::cout << table;
  if (!args.out.empty()) {
    fs::create_directories(args.out);
    write_file_atomic((fs::path(args.out) / "report.txt").string(), table);
    write_file_atomic((fs::path(args.out) / "report.kv").string(), machine.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GCI detection toolkit for pathological speech"};
  app.require_subcommand(1);
  app.set_config("--config");
  app.allow_config_extras(CLI::config_extras_mode::error);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic vowel corpus");
  synth_cmd->add_option("--n", synth_args.n, "number of recordings")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth_args.seed, "root seed")->envname("GCIFORGE_SEED");
  synth_cmd->add_option("--out", synth_args.out, "output directory")->required();
  synth_cmd->add_option("--mix", synth_args.mix,
                        "comma-separated labels to cycle (default: all)");
  synth_cmd->add_option("--duration", synth_args.duration, "seconds per recording")
      ->check(CLI::Range(0.2, 30.0));

  AnnotateArgs annotate_args;
  auto* annotate_cmd =
      app.add_subcommand("annotate", "derive reference marks from the EGG channel");
  annotate_cmd->add_option("--manifest", annotate_args.manifest, "corpus manifest")
      ->required();
  annotate_cmd->add_option("--out", annotate_args.out, "output directory")->required();
  annotate_cmd->add_option("--polarity", annotate_args.polarity, "auto|keep|flip");
  annotate_cmd->add_option("--jobs", annotate_args.jobs, "worker threads");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train the detector models");
  train_cmd->add_option("--manifest", train_args.manifest, "labeled corpus manifest")
      ->required();
  train_cmd->add_option("--out", train_args.out, "checkpoint directory")->required();
  train_cmd->add_option("--seed", train_args.seed, "root seed")->envname("GCIFORGE_SEED");
  train_cmd->add_option("--epochs", train_args.epochs, "max epochs");
  train_cmd->add_option("--batch", train_args.batch, "minibatch size");
  train_cmd->add_option("--lr", train_args.lr, "learning rate");
  train_cmd->add_option("--pos-weight", train_args.pos_weight,
                        "positive-class weight in the loss");
  train_cmd->add_option("--train-frac", train_args.train_frac, "train fraction");
  train_cmd->add_option("--val-frac", train_args.val_frac, "validation fraction");
  train_cmd->add_option("--only", train_args.only, "all|model1..model4|joint");
  train_cmd->add_option("--polarity", train_args.polarity, "auto|keep|flip");
  train_cmd->add_option("--jobs", train_args.jobs, "worker threads for data prep");

  DetectArgs detect_args;
  auto* detect_cmd = app.add_subcommand("detect", "run a detector over recordings");
  detect_cmd->add_option("--manifest", detect_args.manifest, "corpus manifest")
      ->required();
  detect_cmd->add_option("--ckpt", detect_args.ckpt, "checkpoint directory");
  detect_cmd->add_option("--out", detect_args.out, "output mark directory")->required();
  detect_cmd->add_option("--detector", detect_args.detector,
                         "proposed|zff|model1|model2|model3|model4");
  detect_cmd->add_option("--split", detect_args.split, "all|train|val|test");
  detect_cmd->add_option("--fusion", detect_args.fusion, "product|max");
  detect_cmd->add_option("--threshold", detect_args.threshold, "frame threshold");
  detect_cmd->add_flag("--merge-adjacent", detect_args.merge_adjacent,
                       "one mark per run of positive frames");
  detect_cmd->add_flag("--dump-probs", detect_args.dump_probs,
                       "write per-frame probability traces");
  detect_cmd->add_option("--polarity", detect_args.polarity, "auto|keep|flip");
  detect_cmd->add_option("--jobs", detect_args.jobs, "worker threads");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "score detections against references");
  eval_cmd->add_option("--manifest", eval_args.manifest,
                       "manifest whose marks are the references")
      ->required();
  eval_cmd->add_option("--dets", eval_args.dets, "NAME=DIR (repeatable)")->required();
  eval_cmd->add_option("--out", eval_args.out, "report directory");
  eval_cmd->add_flag("--per-disorder", eval_args.per_disorder,
                     "one extra row per disorder label");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // exits 0 with help text
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth_args);
    if (annotate_cmd->parsed()) return run_annotate(annotate_args);
    if (train_cmd->parsed()) return run_train(train_args);
    if (detect_cmd->parsed()) return run_detect(detect_args);
    if (eval_cmd->parsed()) return run_eval(eval_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
