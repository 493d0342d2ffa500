// src/eval.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mlferns/synth.hpp"
#include "mlferns/threading.hpp"

namespace mlferns {

namespace {

double f_score_of(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

}  // namespace

EvalReport rms_weighted_scores(std::span<const FrameAnnotation> predictions,
                               std::span<const FrameAnnotation> truth,
                               const std::vector<std::string>& classes) {
  if (predictions.size() != truth.size()) {
    throw std::invalid_argument("prediction and truth streams have different lengths");
  }
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (std::abs(predictions[i].start_time - truth[i].start_time) > 1e-6) {
      std::ostringstream msg;
      msg << "misaligned streams at t=" << truth[i].start_time << " (prediction t="
          << predictions[i].start_time << ")";
      throw std::invalid_argument(msg.str());
    }
  }

  const std::size_t class_count = classes.size();
  std::vector<double> tp(class_count, 0.0);
  std::vector<double> predicted(class_count, 0.0);
  std::vector<double> annotated(class_count, 0.0);

  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double w = truth[i].rms;
    for (const std::uint32_t y : predictions[i].labels) {
      if (y >= class_count) throw std::invalid_argument("predicted label outside catalog");
      predicted[y] += w;
    }
    for (const std::uint32_t y : truth[i].labels) {
      if (y >= class_count) throw std::invalid_argument("annotated label outside catalog");
      annotated[y] += w;
      if (std::binary_search(predictions[i].labels.begin(), predictions[i].labels.end(), y)) {
        tp[y] += w;
      }
    }
  }

  EvalReport report;
  report.per_instrument.resize(class_count);
  double tp_total = 0.0;
  double predicted_total = 0.0;
  double annotated_total = 0.0;
  for (std::size_t y = 0; y < class_count; ++y) {
    InstrumentScore& s = report.per_instrument[y];
    s.name = classes[y];
    s.tp_mass = tp[y];
    s.predicted_mass = predicted[y];
    s.annotated_mass = annotated[y];
    s.zero_predicted = predicted[y] <= 0.0;
    s.zero_annotated = annotated[y] <= 0.0;
    s.precision = s.zero_predicted ? 0.0 : tp[y] / predicted[y];
    s.recall = s.zero_annotated ? 0.0 : tp[y] / annotated[y];
    s.f_score = f_score_of(s.precision, s.recall);
    tp_total += tp[y];
    predicted_total += predicted[y];
    annotated_total += annotated[y];
  }
  report.precision = predicted_total > 0.0 ? tp_total / predicted_total : 0.0;
  report.recall = annotated_total > 0.0 ? tp_total / annotated_total : 0.0;
  report.f_score = f_score_of(report.precision, report.recall);
  return report;
}

std::vector<FrameAnnotation> annotate_recording(const FernsModel& model,
                                                const FeatureExtractor& extractor,
                                                const AudioSignal& signal, unsigned threads) {
  if (model.feature_count != kFeatureCount) {
    throw std::invalid_argument("model feature count does not match the 91-feature extractor");
  }
  const std::vector<Frame> frames = frame_stream(signal);
  std::vector<FrameAnnotation> annotations(frames.size());
  parallel_for_ranges(frames.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> features(kFeatureCount);
    for (std::size_t i = begin; i < end; ++i) {
      extractor.featurize(frames[i].samples, features);
      annotations[i].start_time = frames[i].start_time;
      annotations[i].rms = signal_rms(frames[i].samples);
      annotations[i].labels = predict(model, features);
    }
  });
  return annotations;
}

std::vector<FrameAnnotation> project_segments(std::span<const LabeledSegment> segments,
                                              std::span<const FrameAnnotation> grid) {
  constexpr double frame_len = static_cast<double>(kFrameSamples) / kSampleRate;
  std::vector<FrameAnnotation> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i].start_time = grid[i].start_time;
    out[i].rms = grid[i].rms;
    const double begin = grid[i].start_time;
    const double end = begin + frame_len;
    LabelSet labels;
    for (const LabeledSegment& seg : segments) {
      const double overlap = std::min(end, seg.end) - std::max(begin, seg.start);
      if (overlap >= 0.5 * frame_len) {
        labels.insert(labels.end(), seg.labels.begin(), seg.labels.end());
      }
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    out[i].labels = std::move(labels);
  }
  return out;
}

}  // namespace mlferns
