// src/synth.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mlferns/kernels.hpp"
#include "mlferns/threading.hpp"

namespace mlferns {

double signal_rms(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  return std::sqrt(kernels::sum_squares(samples.data(), samples.size()) /
                   static_cast<double>(samples.size()));
}

AudioSignal trim_silence(const AudioSignal& signal, double threshold) {
  const std::size_t n = signal.samples.size();
  if (n == 0) throw std::invalid_argument("empty signal");
  const std::size_t block = kHopSamples;  // 10 ms
  const std::size_t blocks = (n + block - 1) / block;

  std::vector<double> block_rms(blocks);
  double peak = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = b * block;
    const std::size_t len = std::min(block, n - begin);
    block_rms[b] = signal_rms({signal.samples.data() + begin, len});
    peak = std::max(peak, block_rms[b]);
  }
  if (peak <= 0.0) throw std::runtime_error("signal is silent");

  const double cut = threshold * peak;
  std::size_t first = 0;
  while (first < blocks && block_rms[first] < cut) ++first;
  std::size_t last = blocks - 1;
  while (last > first && block_rms[last] < cut) --last;

  const std::size_t begin = first * block;
  const std::size_t end = std::min(n, (last + 1) * block);
  AudioSignal out;
  out.sample_rate = signal.sample_rate;
  out.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                     signal.samples.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

AudioSignal rms_normalize(const AudioSignal& signal) {
  const double rms = signal_rms(signal.samples);
  if (rms <= 0.0) throw std::runtime_error("cannot normalize zero-RMS signal");
  AudioSignal out = signal;
  kernels::scale(out.samples.data(), out.samples.size(), 1.0 / rms);
  return out;
}

void InstrumentLibrary::add(const std::string& instrument, AudioSignal signal) {
  if (signal.samples.size() < kFrameSamples) {
    throw std::invalid_argument("library signal shorter than one frame: " + instrument);
  }
  const double rms = signal_rms(signal.samples);
  if (std::abs(rms - 1.0) > 1e-9) {
    throw std::invalid_argument("library signal is not RMS-normalized: " + instrument);
  }
  auto it = std::find(names_.begin(), names_.end(), instrument);
  std::size_t idx;
  if (it == names_.end()) {
    idx = names_.size();
    names_.push_back(instrument);
    signals_.emplace_back();
  } else {
    idx = static_cast<std::size_t>(it - names_.begin());
  }
  signals_[idx].push_back(std::move(signal));
}

InstrumentLibrary InstrumentLibrary::load(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open library manifest: " + manifest_path);
  InstrumentLibrary lib;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string instrument;
    if (!(fields >> instrument)) continue;
    std::string path;
    bool any = false;
    while (fields >> path) {
      any = true;
      AudioSignal raw = read_wav(path);
      lib.add(instrument, rms_normalize(trim_silence(raw)));
    }
    if (!any) {
      throw std::runtime_error("manifest line " + std::to_string(line_no) +
                               " names no WAV files");
    }
  }
  if (lib.instrument_count() == 0) {
    throw std::runtime_error("library manifest is empty: " + manifest_path);
  }
  return lib;
}

MixFrame mix_random_frame(Rng& rng, const InstrumentLibrary& library, unsigned max_polyphony) {
  const std::size_t instruments = library.instrument_count();
  if (max_polyphony == 0) throw std::invalid_argument("max polyphony must be >= 1");
  if (instruments < max_polyphony) {
    throw std::invalid_argument("library smaller than the maximum polyphony");
  }

  const std::size_t polyphony = 1 + static_cast<std::size_t>(rng.below(max_polyphony));

  // Partial Fisher-Yates for distinct instruments, in draw order.
  std::vector<std::uint32_t> pool(instruments);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::size_t i = 0; i < polyphony; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }

  MixFrame mix;
  mix.samples.assign(kFrameSamples, 0.0);
  for (std::size_t i = 0; i < polyphony; ++i) {
    const std::uint32_t instrument = pool[i];
    const auto& signals = library.signals(instrument);
    const AudioSignal& source = signals[rng.below(signals.size())];
    const std::size_t offset = rng.below(source.samples.size() - kFrameSamples + 1);
    const double weight = rng.uniform01_open_low();
    kernels::axpy(weight, source.samples.data() + offset, mix.samples.data(), kFrameSamples);
    mix.weights.emplace_back(instrument, weight);
  }

  const double rms = signal_rms(mix.samples);
  if (rms <= 0.0) throw std::runtime_error("synthesized mix is silent");
  kernels::scale(mix.samples.data(), mix.samples.size(), 1.0 / rms);

  mix.labels.reserve(polyphony);
  for (const auto& [instrument, weight] : mix.weights) mix.labels.push_back(instrument);
  std::sort(mix.labels.begin(), mix.labels.end());
  return mix;
}

MixExample synthesize_example(Rng& rng, const InstrumentLibrary& library,
                              const FeatureExtractor& extractor, unsigned max_polyphony) {
  MixFrame mix = mix_random_frame(rng, library, max_polyphony);
  MixExample example;
  example.features = extractor.featurize(mix.samples);
  example.labels = std::move(mix.labels);
  example.weights = std::move(mix.weights);
  return example;
}

std::vector<MixExample> synthesize_examples(std::uint64_t seed, const InstrumentLibrary& library,
                                            const FeatureExtractor& extractor, std::size_t n,
                                            unsigned max_polyphony, unsigned threads) {
  if (n == 0) throw std::invalid_argument("example count must be >= 1");
  std::vector<MixExample> examples(n);
  parallel_for_ranges(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, i));
      examples[i] = synthesize_example(rng, library, extractor, max_polyphony);
    }
  });
  return examples;
}

TrainingSet build_training_set(std::uint64_t seed, const InstrumentLibrary& library,
                               const FeatureExtractor& extractor, std::size_t n,
                               unsigned max_polyphony, unsigned threads) {
  const auto examples = synthesize_examples(seed, library, extractor, n, max_polyphony, threads);
  TrainingSet set(library.names(), kFeatureCount);
  for (const auto& e : examples) set.add(e.features, e.labels);
  return set;
}

}  // namespace mlferns
