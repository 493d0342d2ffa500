// mlferns/synth.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_SYNTH_HPP
#define MLFERNS_SYNTH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mlferns/dataset.hpp"
#include "mlferns/features.hpp"
#include "mlferns/rng.hpp"
#include "mlferns/wav.hpp"

namespace mlferns {

// RMS over the whole signal.
double signal_rms(std::span<const double> samples);

// Drops leading and trailing 10 ms blocks whose RMS is below
// threshold * (loudest block RMS). Interior samples are untouched.
AudioSignal trim_silence(const AudioSignal& signal, double threshold = 0.01);

// Scales so the RMS equals one.
AudioSignal rms_normalize(const AudioSignal& signal);

// Isolated-instrument recordings, silence-trimmed and RMS-normalized.
// Instrument order follows first appearance (manifest order).
class InstrumentLibrary {
 public:
  // Adds one prepared signal; enforces RMS = 1 +- 1e-9 and length >= 1764.
  void add(const std::string& instrument, AudioSignal signal);

  // Manifest: one entry per line, "instrument path [path ...]"; blank lines
  // and #-comments ignored. Lines for the same instrument accumulate.
  // Each WAV is trimmed and normalized on ingestion.
  static InstrumentLibrary load(const std::string& manifest_path);

  std::size_t instrument_count() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<AudioSignal>& signals(std::size_t instrument) const {
    return signals_[instrument];
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<AudioSignal>> signals_;
};

struct MixFrame {
  std::vector<double> samples;                            // one 40 ms frame, RMS 1
  LabelSet labels;                                        // instruments mixed in
  std::vector<std::pair<std::uint32_t, double>> weights;  // (instrument, weight)
};

struct MixExample {
  std::vector<double> features;  // 91
  LabelSet labels;
  std::vector<std::pair<std::uint32_t, double>> weights;
};

// One training mix: 1 to max_polyphony distinct instruments, a random
// 40 ms frame each, random weights in (0, 1], summed and re-normalized to
// RMS 1. Draw order: polyphony, instruments, then per instrument signal,
// offset, weight.
MixFrame mix_random_frame(Rng& rng, const InstrumentLibrary& library,
                          unsigned max_polyphony = 4);

// mix_random_frame followed by featurization.
MixExample synthesize_example(Rng& rng, const InstrumentLibrary& library,
                              const FeatureExtractor& extractor, unsigned max_polyphony = 4);

// n examples; example i draws from substream i of `seed`.
std::vector<MixExample> synthesize_examples(std::uint64_t seed, const InstrumentLibrary& library,
                                            const FeatureExtractor& extractor, std::size_t n,
                                            unsigned max_polyphony = 4, unsigned threads = 1);

// Same examples packed into a training set; catalog = library names.
TrainingSet build_training_set(std::uint64_t seed, const InstrumentLibrary& library,
                               const FeatureExtractor& extractor, std::size_t n,
                               unsigned max_polyphony = 4, unsigned threads = 1);

}  // namespace mlferns

#endif  // MLFERNS_SYNTH_HPP
