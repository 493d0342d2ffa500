// mlferns/eval.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_EVAL_HPP
#define MLFERNS_EVAL_HPP

#include <span>
#include <string>
#include <vector>

#include "mlferns/dataset.hpp"
#include "mlferns/features.hpp"
#include "mlferns/ferns.hpp"
#include "mlferns/wav.hpp"

namespace mlferns {

struct FrameAnnotation {
  double start_time = 0.0;
  double rms = 0.0;  // frame loudness weight
  LabelSet labels;
};

struct InstrumentScore {
  std::string name;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double tp_mass = 0.0;
  double predicted_mass = 0.0;
  double annotated_mass = 0.0;
  bool zero_predicted = false;  // precision denominator was zero
  bool zero_annotated = false;  // recall denominator was zero
};

struct EvalReport {
  std::vector<InstrumentScore> per_instrument;
  double precision = 0.0;  // micro-averaged over mass sums
  double recall = 0.0;
  double f_score = 0.0;
};

// RMS-weighted precision/recall/F per instrument plus the micro-averaged
// overall row. Streams must be aligned 1:1 by start_time (within 1e-6 s);
// the weight of frame i is truth[i].rms. Zero-denominator scores are 0 and
// flagged.
EvalReport rms_weighted_scores(std::span<const FrameAnnotation> predictions,
                               std::span<const FrameAnnotation> truth,
                               const std::vector<std::string>& classes);

// Runs the model over every 40 ms frame of the signal; rms comes from the
// raw frame, labels from the model's mode-appropriate prediction.
std::vector<FrameAnnotation> annotate_recording(const FernsModel& model,
                                                const FeatureExtractor& extractor,
                                                const AudioSignal& signal, unsigned threads = 1);

// A ground-truth time segment with the instruments sounding in it.
struct LabeledSegment {
  double start = 0.0;
  double end = 0.0;
  LabelSet labels;
};

// Projects segment annotations onto a frame grid: a frame carries label i
// iff at least half of its 40 ms span overlaps a segment labeled i. Times
// and rms weights are taken from `grid`.
std::vector<FrameAnnotation> project_segments(std::span<const LabeledSegment> segments,
                                              std::span<const FrameAnnotation> grid);

}  // namespace mlferns

#endif  // MLFERNS_EVAL_HPP
