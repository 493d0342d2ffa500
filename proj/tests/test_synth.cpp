// tests/test_synth.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mlferns/wav.hpp"

using namespace mlferns;

namespace {

AudioSignal sine_signal(double freq, std::size_t n, double amplitude = 0.5) {
  AudioSignal s;
  s.samples.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    s.samples[t] = amplitude * std::sin(2.0 * M_PI * freq * static_cast<double>(t) / kSampleRate);
  }
  return s;
}

InstrumentLibrary tone_library(std::size_t instruments, std::size_t signal_len = 4 * 4410) {
  InstrumentLibrary lib;
  for (std::size_t i = 0; i < instruments; ++i) {
    lib.add("tone" + std::to_string(i),
            rms_normalize(sine_signal(300.0 * static_cast<double>(i + 1), signal_len)));
  }
  return lib;
}

const FeatureExtractor& extractor() {
  static const FeatureExtractor fx;
  return fx;
}

}  // namespace

TEST_CASE("signal_rms basics") {
  const std::vector<double> constant(100, 2.0);
  CHECK(signal_rms(constant) == doctest::Approx(2.0));
  CHECK(signal_rms(std::vector<double>{}) == 0.0);
}

TEST_CASE("trim_silence keeps loud spans and errors on silence") {
  // no sub-threshold block: unchanged
  AudioSignal loud = sine_signal(440.0, 8820, 0.5);
  const AudioSignal trimmed = trim_silence(loud, 0.01);
  CHECK(trimmed.samples == loud.samples);

  // [silence | tone | silence]: back to the tone span within one block
  const std::size_t block = 441;
  AudioSignal padded;
  padded.samples.assign(20 * block, 0.0);
  const std::size_t tone_begin = 5 * block;
  const std::size_t tone_end = 13 * block;
  const AudioSignal tone = sine_signal(440.0, tone_end - tone_begin, 0.5);
  std::copy(tone.samples.begin(), tone.samples.end(), padded.samples.begin() + tone_begin);
  const AudioSignal cut = trim_silence(padded, 0.01);
  CHECK(cut.samples.size() >= tone_end - tone_begin);
  CHECK(cut.samples.size() <= tone_end - tone_begin + 2 * block);

  AudioSignal zero;
  zero.samples.assign(4410, 0.0);
  CHECK_THROWS_WITH(trim_silence(zero, 0.01), doctest::Contains("silent"));
}

TEST_CASE("rms_normalize scales to unit RMS") {
  AudioSignal constant;
  constant.samples.assign(500, 2.0);
  const AudioSignal unit = rms_normalize(constant);
  for (const double v : unit.samples) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  const AudioSignal again = rms_normalize(unit);
  CHECK(signal_rms(again.samples) == doctest::Approx(1.0).epsilon(1e-9));

  // sine of amplitude 0.1 -> amplitude sqrt(2)
  const AudioSignal sine = rms_normalize(sine_signal(441.0, 44100, 0.1));
  double peak = 0.0;
  for (const double v : sine.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));

  AudioSignal zero;
  zero.samples.assign(100, 0.0);
  CHECK_THROWS(rms_normalize(zero));
}

TEST_CASE("library rejects unprepared signals") {
  InstrumentLibrary lib;
  CHECK_THROWS(lib.add("short", rms_normalize(sine_signal(440.0, 1000))));
  AudioSignal raw = sine_signal(440.0, 5000, 0.3);  // RMS != 1
  CHECK_THROWS(lib.add("loudness", raw));
}

TEST_CASE("every synthesized mix has unit RMS and consistent labels") {
  const InstrumentLibrary lib = tone_library(5);
  Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    const MixFrame mix = mix_random_frame(rng, lib, 4);
    REQUIRE(mix.samples.size() == kFrameSamples);
    CHECK(signal_rms(mix.samples) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mix.labels.size() >= 1);
    CHECK(mix.labels.size() <= 4);
    REQUIRE(mix.labels.size() == mix.weights.size());
    LabelSet from_weights;
    for (const auto& [inst, w] : mix.weights) {
      CHECK(w > 0.0);
      CHECK(w <= 1.0);
      from_weights.push_back(inst);
    }
    std::sort(from_weights.begin(), from_weights.end());
    CHECK(from_weights == mix.labels);
  }
}

TEST_CASE("single-instrument example equals the normalized source frame") {
  // One instrument whose only signal is exactly one frame long: the drawn
  // frame is forced, so the weight must cancel under re-normalization.
  InstrumentLibrary lib;
  lib.add("only", rms_normalize(sine_signal(523.0, kFrameSamples, 0.4)));
  Rng rng(3);
  const MixExample example = synthesize_example(rng, lib, extractor(), 1);
  CHECK(example.labels == LabelSet{0});

  const AudioSignal source = rms_normalize(sine_signal(523.0, kFrameSamples, 0.4));
  const auto expected = extractor().featurize(source.samples);
  REQUIRE(example.features.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(example.features[i] ==
          doctest::Approx(expected[i]).epsilon(1e-9).scale(std::max(1.0, std::abs(expected[i]))));
  }
}

TEST_CASE("polyphony is uniform over 1..4") {
  const InstrumentLibrary lib = tone_library(4);
  Rng rng(1234);
  int counts[5] = {0};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const MixFrame mix = mix_random_frame(rng, lib, 4);
    ++counts[mix.labels.size()];
  }
  for (int m = 1; m <= 4; ++m) {
    const double freq = static_cast<double>(counts[m]) / draws;
    CHECK(freq > 0.23);
    CHECK(freq < 0.27);
  }
}

TEST_CASE("synthesis is deterministic per seed and varies across seeds") {
  const InstrumentLibrary lib = tone_library(4);
  const auto a = synthesize_examples(42, lib, extractor(), 5, 4, 2);
  const auto b = synthesize_examples(42, lib, extractor(), 5, 4, 1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].features == b[i].features);
    CHECK(a[i].labels == b[i].labels);
  }
  const auto c = synthesize_examples(43, lib, extractor(), 5, 4, 2);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].features != c[i].features) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("build_training_set assembles the catalog from the library") {
  const InstrumentLibrary lib = tone_library(4);
  const TrainingSet set = build_training_set(7, lib, extractor(), 25, 4, 2);
  CHECK(set.size() == 25);
  CHECK(set.classes() == lib.names());
  CHECK(set.feature_count() == kFeatureCount);
  for (std::size_t i = 0; i < set.size(); ++i) {
    CHECK(set.labels_of(i).size() >= 1);
    CHECK(set.labels_of(i).size() <= 4);
  }
}

TEST_CASE("library manifest loading trims and normalizes") {
  // two instruments, one with leading/trailing silence
  const std::string wav_a = "synth_test_a.wav";
  const std::string wav_b = "synth_test_b.wav";
  AudioSignal a = sine_signal(440.0, 22050, 0.5);
  AudioSignal padded;
  padded.samples.assign(4410, 0.0);
  const AudioSignal tone = sine_signal(660.0, 22050, 0.25);
  padded.samples.insert(padded.samples.end(), tone.samples.begin(), tone.samples.end());
  padded.samples.insert(padded.samples.end(), 4410, 0.0);
  write_wav(wav_a, a.samples);
  write_wav(wav_b, padded.samples);

  const std::string manifest = "synth_test_manifest.txt";
  {
    std::ofstream out(manifest);
    out << "# tone library\n";
    out << "alpha " << wav_a << "\n";
    out << "beta " << wav_b << "\n";
  }
  const InstrumentLibrary lib = InstrumentLibrary::load(manifest);
  CHECK(lib.names() == std::vector<std::string>{"alpha", "beta"});
  for (std::size_t i = 0; i < 2; ++i) {
    for (const auto& sig : lib.signals(i)) {
      CHECK(signal_rms(sig.samples) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(sig.samples.size() >= kFrameSamples);
    }
  }
  // beta's padding got trimmed: at most one extra block on each side
  CHECK(lib.signals(1)[0].samples.size() <= 22050 + 2 * 441);

  std::remove(wav_a.c_str());
  std::remove(wav_b.c_str());
  std::remove(manifest.c_str());
}
