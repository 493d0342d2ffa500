// tools/mlferns_main.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include "mlferns/csv.hpp"
#include "mlferns/eval.hpp"
#include "mlferns/features.hpp"
#include "mlferns/ferns.hpp"
#include "mlferns/kernels.hpp"
#include "mlferns/model_io.hpp"
#include "mlferns/synth.hpp"
#include "mlferns/threading.hpp"
#include "mlferns/wav.hpp"

namespace fs = std::filesystem;
using namespace mlferns;

namespace {

unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

std::vector<std::string> label_names(const FernsModel& model, const LabelSet& labels) {
  std::vector<std::string> names;
  names.reserve(labels.size());
  for (const auto y : labels) names.push_back(model.classes[y]);
  return names;
}

// Training data from a labeled feature CSV; the catalog is the sorted set
// of label names seen in the file.
TrainingSet training_set_from_csv(const std::string& path) {
  bool has_labels = false;
  const auto rows = read_feature_csv(path, &has_labels);
  if (!has_labels) {
    throw std::runtime_error("training data needs a labels column: " + path);
  }
  if (rows.empty()) throw std::runtime_error("training data is empty: " + path);

  std::set<std::string> names;
  for (const auto& row : rows) names.insert(row.labels.begin(), row.labels.end());
  std::vector<std::string> catalog(names.begin(), names.end());
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < catalog.size(); ++i) index[catalog[i]] = i;

  TrainingSet set(catalog, kFeatureCount);
  for (const auto& row : rows) {
    LabelSet labels;
    for (const auto& name : row.labels) labels.push_back(index.at(name));
    set.add(row.features, std::move(labels));
  }
  return set;
}

int cmd_synth(const std::string& library_path, std::size_t n, const std::string& out,
              std::uint64_t seed, unsigned max_polyphony, unsigned threads) {
  const InstrumentLibrary library = InstrumentLibrary::load(library_path);
  const FeatureExtractor extractor;
  const auto examples = synthesize_examples(seed, library, extractor, n, max_polyphony, threads);
  std::vector<FeatureRecord> rows(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    rows[i].features = examples[i].features;
    rows[i].start_time = 0.0;
    for (const auto y : examples[i].labels) rows[i].labels.push_back(library.names()[y]);
  }
  write_feature_csv(out, rows, true);
  std::cout << "wrote " << rows.size() << " examples (" << library.instrument_count()
            << " instruments) to " << out << "\n";
  return 0;
}

int cmd_features(const std::string& wav_path, const std::string& out, unsigned threads) {
  const AudioSignal signal = read_wav(wav_path);
  const FeatureExtractor extractor;
  const auto frames = frame_stream(signal);
  std::vector<FeatureRecord> rows(frames.size());
  parallel_for_ranges(frames.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      rows[i].features = extractor.featurize(frames[i].samples);
      rows[i].start_time = frames[i].start_time;
    }
  });
  write_feature_csv(out, rows, false);
  std::cout << "wrote " << rows.size() << " frames to " << out << "\n";
  return 0;
}

int cmd_train(const std::string& data, const std::string& mode, std::uint32_t depth,
              std::uint32_t ferns, std::uint64_t seed, std::uint32_t per_class_cap,
              bool leaf32, const std::string& out, unsigned threads) {
  const TrainingSet set = training_set_from_csv(data);
  FernsModel model;
  if (mode == "multilabel") {
    model = train_multilabel(set, ferns, depth, seed, threads);
  } else if (mode == "battery") {
    model = train_battery(set, ferns, depth, seed, per_class_cap, threads);
  } else {
    throw std::runtime_error("unknown mode '" + mode + "' (multilabel or battery)");
  }
  save_model(model, out, SaveOptions{leaf32});
  std::cout << "trained " << mode << " model: K=" << ferns << " D=" << depth
            << " C=" << model.classes.size() << " on " << set.size() << " examples -> " << out
            << " (" << serialized_size(model, SaveOptions{leaf32}) << " bytes)\n";
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& wav_path,
                const std::string& out, unsigned threads) {
  const FernsModel model = load_model(model_path);
  const AudioSignal signal = read_wav(wav_path);
  const FeatureExtractor extractor;
  const auto annotations = annotate_recording(model, extractor, signal, threads);
  std::vector<FrameRecord> rows(annotations.size());
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    rows[i].start_time = annotations[i].start_time;
    rows[i].rms = annotations[i].rms;
    rows[i].labels = label_names(model, annotations[i].labels);
  }
  write_frame_csv(out, rows);
  std::cout << "wrote " << rows.size() << " frame predictions to " << out << "\n";
  return 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& truth_path,
                 const std::string& out) {
  const auto pred_rows = read_frame_csv(pred_path);
  const auto segments = read_segments_csv(truth_path);

  std::set<std::string> names;
  for (const auto& row : pred_rows) names.insert(row.labels.begin(), row.labels.end());
  for (const auto& seg : segments) names.insert(seg.labels.begin(), seg.labels.end());
  const std::vector<std::string> catalog(names.begin(), names.end());
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < catalog.size(); ++i) index[catalog[i]] = i;

  std::vector<FrameAnnotation> predictions(pred_rows.size());
  for (std::size_t i = 0; i < pred_rows.size(); ++i) {
    predictions[i].start_time = pred_rows[i].start_time;
    predictions[i].rms = pred_rows[i].rms;
    for (const auto& name : pred_rows[i].labels) predictions[i].labels.push_back(index.at(name));
    std::sort(predictions[i].labels.begin(), predictions[i].labels.end());
  }

  std::vector<LabeledSegment> labeled(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    labeled[i].start = segments[i].start;
    labeled[i].end = segments[i].end;
    for (const auto& name : segments[i].labels) labeled[i].labels.push_back(index.at(name));
    std::sort(labeled[i].labels.begin(), labeled[i].labels.end());
  }
  const auto truth = project_segments(labeled, predictions);

  const EvalReport report = rms_weighted_scores(predictions, truth, catalog);
  write_report(std::cout, report);
  if (!out.empty()) write_report(out, report);
  return 0;
}

struct BenchEntry {
  std::string path;
  std::uint64_t bytes;
  FernsModel model;
};

int cmd_bench(const std::string& models_dir, const std::string& wav_dir, const std::string& out,
              unsigned repeats) {
  std::vector<std::string> model_paths;
  for (const auto& entry : fs::directory_iterator(models_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".mlfern") {
      model_paths.push_back(entry.path().string());
    }
  }
  std::sort(model_paths.begin(), model_paths.end());
  if (model_paths.empty()) {
    throw std::runtime_error("no .mlfern models under " + models_dir);
  }

  std::vector<std::string> wav_paths;
  for (const auto& entry : fs::directory_iterator(wav_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      wav_paths.push_back(entry.path().string());
    }
  }
  std::sort(wav_paths.begin(), wav_paths.end());
  if (wav_paths.empty()) throw std::runtime_error("no .wav files under " + wav_dir);

  // Featurize everything once, timing the extraction.
  const FeatureExtractor extractor;
  double audio_seconds = 0.0;
  std::vector<std::vector<double>> features;
  const double feat_begin = cpu_seconds();
  for (const auto& path : wav_paths) {
    const AudioSignal signal = read_wav(path);
    audio_seconds += static_cast<double>(signal.samples.size()) / kSampleRate;
    for (const auto& frame : frame_stream(signal)) {
      features.push_back(extractor.featurize(frame.samples));
    }
  }
  const double feat_seconds = cpu_seconds() - feat_begin;

  std::ostringstream report;
  report << "audio_seconds=" << audio_seconds << "\n";
  report << "frames=" << features.size() << "\n";
  report << "featurize_cpu_seconds=" << feat_seconds << "\n";
  report << "kernel_backend=" << kernels::backend_name(kernels::active_backend()) << "\n";

  for (const auto& path : model_paths) {
    const FernsModel model = load_model(path);
    const std::uint64_t bytes = fs::file_size(path);

    std::vector<double> sums(model.class_count());
    std::size_t positives = 0;  // keep the loop observable
    const double begin = cpu_seconds();
    for (unsigned r = 0; r < repeats; ++r) {
      for (const auto& x : features) {
        if (model.mode == ModelMode::Battery) {
          battery_margins(model, x, sums);
        } else {
          multilabel_sums(model, x, sums);
        }
        for (const double s : sums) positives += s > 0.0;
      }
    }
    const double predict_seconds = (cpu_seconds() - begin) / repeats;
    const double rtf_predict = predict_seconds > 0.0 ? audio_seconds / predict_seconds : 0.0;
    const double rtf_full = (predict_seconds + feat_seconds) > 0.0
                                ? audio_seconds / (predict_seconds + feat_seconds)
                                : 0.0;

    const std::string name = fs::path(path).filename().string();
    report << "model." << name << ".mode="
           << (model.mode == ModelMode::Battery ? "battery" : "multilabel") << "\n";
    report << "model." << name << ".bytes=" << bytes << "\n";
    report << "model." << name << ".ferns=" << model.fern_count << "\n";
    report << "model." << name << ".depth=" << model.depth << "\n";
    report << "model." << name << ".classes=" << model.classes.size() << "\n";
    report << "model." << name << ".predict_cpu_seconds=" << predict_seconds << "\n";
    report << "model." << name << ".rtf_predict=" << rtf_predict << "\n";
    report << "model." << name << ".rtf_with_features=" << rtf_full << "\n";
    report << "model." << name << ".positive_scores=" << positives << "\n";
  }

  std::cout << report.str();
  if (!out.empty()) {
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot open report for writing: " + out);
    file << report.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-label random ferns for polyphonic instrument recognition"};
  app.require_subcommand(1);

  unsigned threads = default_threads();
  app.add_option("--threads", threads, "worker thread cap (1 = single-threaded)")
      ->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "synthesize labeled training mixes");
  std::string synth_library, synth_out;
  std::size_t synth_n = 100000;
  std::uint64_t synth_seed = 0;
  unsigned synth_poly = 4;
  synth->add_option("--library", synth_library, "instrument manifest")->required();
  synth->add_option("--n", synth_n, "number of examples")->capture_default_str();
  synth->add_option("--out", synth_out, "output feature CSV")->required();
  synth->add_option("--seed", synth_seed, "random seed")->capture_default_str();
  synth->add_option("--max-polyphony", synth_poly, "maximum instruments per mix")
      ->capture_default_str();

  // features
  auto* features = app.add_subcommand("features", "extract frame features from audio");
  std::string features_wav, features_out;
  features->add_option("--wav", features_wav, "input WAV (16-bit PCM, 44100 Hz)")->required();
  features->add_option("--out", features_out, "output feature CSV")->required();

  // train
  auto* train = app.add_subcommand("train", "train a ferns model from a feature CSV");
  std::string train_data, train_mode = "multilabel", train_out;
  std::uint32_t train_depth = 10, train_ferns = 1000, train_cap = 3000;
  std::uint64_t train_seed = 0;
  bool train_leaf32 = false;
  train->add_option("--data", train_data, "labeled feature CSV")->required();
  train->add_option("--mode", train_mode, "multilabel or battery")->capture_default_str();
  train->add_option("--depth", train_depth, "fern depth D")->capture_default_str();
  train->add_option("--ferns", train_ferns, "ensemble size K")->capture_default_str();
  train->add_option("--seed", train_seed, "random seed")->capture_default_str();
  train->add_option("--per-class-cap", train_cap, "battery positives cap per class")
      ->capture_default_str();
  train->add_flag("--leaf32", train_leaf32, "store leaf values as 32-bit floats");
  train->add_option("--out", train_out, "output model file")->required();

  // predict
  auto* predict = app.add_subcommand("predict", "annotate a recording with a trained model");
  std::string predict_model, predict_wav, predict_out;
  predict->add_option("--model", predict_model, "model file")->required();
  predict->add_option("--wav", predict_wav, "input WAV")->required();
  predict->add_option("--out", predict_out, "output frame CSV")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "score predictions against annotations");
  std::string eval_pred, eval_truth, eval_out;
  evaluate->add_option("--pred", eval_pred, "frame prediction CSV")->required();
  evaluate->add_option("--truth", eval_truth, "segment annotation CSV")->required();
  evaluate->add_option("--out", eval_out, "report file (also printed)");

  // bench
  auto* bench = app.add_subcommand("bench", "measure model size and prediction speed");
  std::string bench_models, bench_wavs, bench_out;
  unsigned bench_repeats = 3;
  bench->add_option("--models", bench_models, "directory of .mlfern models")->required();
  bench->add_option("--wav", bench_wavs, "directory of .wav recordings")->required();
  bench->add_option("--out", bench_out, "report file (also printed)");
  bench->add_option("--repeat", bench_repeats, "prediction timing repeats")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      return cmd_synth(synth_library, synth_n, synth_out, synth_seed, synth_poly, threads);
    }
    if (features->parsed()) return cmd_features(features_wav, features_out, threads);
    if (train->parsed()) {
      return cmd_train(train_data, train_mode, train_depth, train_ferns, train_seed, train_cap,
                       train_leaf32, train_out, threads);
    }
    if (predict->parsed()) return cmd_predict(predict_model, predict_wav, predict_out, threads);
    if (evaluate->parsed()) return cmd_evaluate(eval_pred, eval_truth, eval_out);
    if (bench->parsed()) return cmd_bench(bench_models, bench_wavs, bench_out, bench_repeats);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
