// tests/test_features.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/features.hpp"

#include <doctest.h>

#include <cmath>

#include "mlferns/rng.hpp"
#include "oracles.hpp"

using namespace mlferns;

namespace {

std::vector<double> make_sine(double freq, std::size_t n, double amplitude = 1.0,
                              double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    x[t] = amplitude * std::sin(2.0 * M_PI * freq * static_cast<double>(t) / kSampleRate + phase);
  }
  return x;
}

const FeatureExtractor& extractor() {
  static const FeatureExtractor fx;
  return fx;
}

enum BaseFeature : std::size_t {
  kAsc = 25,
  kAss = 26,
  kEnergy = 27,
  kMfcc1 = 28,
  kMfcc13 = 40,
  kZcr = 41,
  kRollOff = 42,
  kLinCentroid = 43,
  kLinSpread = 44,
};

}  // namespace

TEST_CASE("frame_stream enumerates 40 ms frames at 10 ms hops") {
  AudioSignal one_second;
  one_second.samples.assign(44100, 0.0);
  const auto frames = frame_stream(one_second);
  CHECK(frames.size() == 97);
  CHECK(frames[0].start_time == 0.0);
  CHECK(frames[1].start_time == doctest::Approx(0.01));
  CHECK(frames.back().start_time == doctest::Approx(0.96));

  AudioSignal exact;
  exact.samples.assign(kFrameSamples, 0.0);
  CHECK(frame_stream(exact).size() == 1);

  AudioSignal short_by_one;
  short_by_one.samples.assign(kFrameSamples - 1, 0.0);
  CHECK(frame_stream(short_by_one).empty());
}

TEST_CASE("power spectrum of silence is zero") {
  const std::vector<double> zero(kFrameSamples, 0.0);
  const PowerSpectrum spec = extractor().power_spectrum(zero);
  REQUIRE(spec.power.size() == kFrameSamples / 2 + 1);
  CHECK(spec.bin_hz == doctest::Approx(25.0));
  for (const double p : spec.power) CHECK(p == 0.0);
}

TEST_CASE("power spectrum peaks at the sine bin and matches the naive DFT") {
  const auto sine = make_sine(1000.0, kFrameSamples);
  const PowerSpectrum spec = extractor().power_spectrum(sine);

  std::size_t argmax = 0;
  for (std::size_t b = 1; b < spec.power.size(); ++b) {
    if (spec.power[b] > spec.power[argmax]) argmax = b;
  }
  CHECK(argmax == 40);  // 1000 Hz at 25 Hz resolution

  // Independent oracle: naive DFT of the Hamming-windowed frame.
  std::vector<double> windowed(kFrameSamples);
  for (std::size_t i = 0; i < kFrameSamples; ++i) {
    const double w = 0.54 - 0.46 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                            static_cast<double>(kFrameSamples - 1));
    windowed[i] = sine[i] * w;
  }
  const auto oracle = oracles::naive_dft(windowed);
  double peak = 0.0;
  for (const auto& c : oracle) peak = std::max(peak, std::norm(c));
  for (std::size_t b = 0; b < spec.power.size(); ++b) {
    CHECK(spec.power[b] == doctest::Approx(std::norm(oracle[b])).epsilon(1e-9).scale(peak));
  }
}

TEST_CASE("Parseval: windowed energy equals spectrum energy") {
  const auto sine = make_sine(1234.0, kFrameSamples, 0.8, 0.3);
  std::vector<double> windowed(kFrameSamples);
  double time_energy = 0.0;
  for (std::size_t i = 0; i < kFrameSamples; ++i) {
    const double w = 0.54 - 0.46 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                            static_cast<double>(kFrameSamples - 1));
    windowed[i] = sine[i] * w;
    time_energy += windowed[i] * windowed[i];
  }
  const PowerSpectrum spec = extractor().power_spectrum(sine);
  // Real-input symmetry: bins 1..N/2-1 appear twice in the full spectrum.
  double freq_energy = spec.power[0] + spec.power.back();
  for (std::size_t b = 1; b + 1 < spec.power.size(); ++b) freq_energy += 2.0 * spec.power[b];
  freq_energy /= static_cast<double>(kFrameSamples);
  CHECK(freq_energy == doctest::Approx(time_energy).epsilon(1e-6));
}

TEST_CASE("base descriptors of a 1 kHz sine match closed forms") {
  const auto sine = make_sine(1000.0, kFrameSamples);
  const auto base = extractor().base_descriptors(sine);
  REQUIRE(base.size() == kBaseFeatureCount);

  CHECK(base[kLinCentroid] == doctest::Approx(1000.0).epsilon(25.0 / 1000.0));
  CHECK(base[kAsc] == doctest::Approx(0.0).scale(1.0).epsilon(0.04));
  CHECK(base[kRollOff] >= 975.0);
  CHECK(base[kRollOff] <= 1025.0);
  CHECK(base[kZcr] == doctest::Approx(80.0 / 1764.0).epsilon(0.001 / 0.045));
}

TEST_CASE("silence produces finite, floored descriptors") {
  const std::vector<double> zero(kFrameSamples, 0.0);
  const auto features = extractor().featurize(zero);
  REQUIRE(features.size() == kFeatureCount);
  for (const double v : features) CHECK(std::isfinite(v));
  const auto base = extractor().base_descriptors(zero);
  CHECK(base[kEnergy] == doctest::Approx(std::log(1e-12)));
  CHECK(base[kZcr] == 0.0);
  CHECK(base[kRollOff] == 0.0);
  for (std::size_t k = 0; k < 25; ++k) {
    CHECK(base[k] >= 0.0);
    CHECK(base[k] <= 1.0);
  }
  CHECK(features[2 * kBaseFeatureCount] == 0.0);  // flux of silence
}

TEST_CASE("white noise roll-off and mid-band flatness behave statistically") {
  Rng rng(13);
  double rolloff_sum = 0.0;
  std::vector<double> flat_sum(25, 0.0);
  const int frames = 100;
  for (int f = 0; f < frames; ++f) {
    std::vector<double> noise(kFrameSamples);
    for (double& v : noise) v = rng.uniform(-1.0, 1.0);
    const auto base = extractor().base_descriptors(noise);
    rolloff_sum += base[kRollOff];
    for (std::size_t k = 0; k < 25; ++k) flat_sum[k] += base[k];
  }
  const double mean_rolloff = rolloff_sum / frames;
  CHECK(mean_rolloff == doctest::Approx(0.85 * 22050.0).epsilon(500.0 / 18742.0));
  for (std::size_t k = 10; k < 23; ++k) {  // mid bands have many bins
    CHECK(flat_sum[k] / frames > 0.5);
  }
}

TEST_CASE("stationary sine has near-zero deltas and flux") {
  // 1000 Hz: the 10 ms offset is an integer number of periods, so the two
  // sub-frames hold the same waveform.
  const auto sine = make_sine(1000.0, kFrameSamples);
  const auto deltas = extractor().delta_features(sine);
  const auto base = extractor().base_descriptors(sine);
  for (std::size_t i = 0; i < kBaseFeatureCount; ++i) {
    if (i == kZcr) {
      CHECK(std::abs(deltas[i]) <= 2.0 / 1323.0);
    } else {
      CHECK(std::abs(deltas[i]) < 1e-6 * std::max(1.0, std::abs(base[i])));
    }
  }

  const double fx = extractor().flux(sine);
  const PowerSpectrum spec = extractor().power_spectrum(sine);
  double peak = 0.0;
  for (const double p : spec.power) peak = std::max(peak, p);
  CHECK(fx < 1e-6 * peak);
}

TEST_CASE("energy delta is negative when the second half is silent") {
  auto frame = make_sine(500.0, kFrameSamples);
  for (std::size_t i = kFrameSamples / 2; i < kFrameSamples; ++i) frame[i] = 0.0;
  const auto deltas = extractor().delta_features(frame);
  CHECK(deltas[kEnergy] < 0.0);
}

TEST_CASE("two-tone switch raises the centroid delta and the flux") {
  std::vector<double> frame(kFrameSamples);
  const auto low = make_sine(500.0, kFrameSamples);
  const auto high = make_sine(2000.0, kFrameSamples);
  for (std::size_t i = 0; i < kFrameSamples; ++i) {
    frame[i] = i < kFrameSamples / 2 ? low[i] : high[i];
  }
  const auto deltas = extractor().delta_features(frame);
  CHECK(deltas[kLinCentroid] > 0.0);

  // flux equals an independent recomputation from naive DFTs
  const double fx = extractor().flux(frame);
  std::vector<double> wa(kSubFrameSamples), wb(kSubFrameSamples);
  for (std::size_t i = 0; i < kSubFrameSamples; ++i) {
    const double w = 0.54 - 0.46 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                            static_cast<double>(kSubFrameSamples - 1));
    wa[i] = frame[i] * w;
    wb[i] = frame[i + kSubFrameOffset] * w;
  }
  const auto da = oracles::naive_dft(wa);
  const auto db = oracles::naive_dft(wb);
  double expected = 0.0;
  for (std::size_t b = 0; b < da.size(); ++b) {
    const double d = std::abs(db[b]) - std::abs(da[b]);
    expected += d * d;
  }
  CHECK(fx > 0.0);
  CHECK(fx == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("featurize returns 91 finite values and is pure") {
  const auto sine = make_sine(777.0, kFrameSamples, 0.5);
  const auto a = extractor().featurize(sine);
  const auto b = extractor().featurize(sine);
  REQUIRE(a.size() == kFeatureCount);
  for (const double v : a) CHECK(std::isfinite(v));
  CHECK(a == b);  // bit-stable

  CHECK_THROWS(extractor().featurize(std::vector<double>(100, 0.0)));
}

TEST_CASE("amplitude scaling moves only the energy-like features") {
  const auto frame = make_sine(863.0, kFrameSamples, 0.2, 0.7);
  auto scaled = frame;
  for (double& v : scaled) v *= 4.0;  // exact in floating point

  const auto base = extractor().base_descriptors(frame);
  const auto scaled_base = extractor().base_descriptors(scaled);
  const double log_gain = std::log(16.0);  // power scales by alpha^2

  for (std::size_t i = 0; i < kBaseFeatureCount; ++i) {
    if (i == kEnergy || i == kMfcc13) {
      CHECK(scaled_base[i] == doctest::Approx(base[i] + log_gain).epsilon(1e-9));
    } else {
      CHECK(scaled_base[i] == doctest::Approx(base[i]).epsilon(1e-9));
    }
  }

  const double flux = extractor().flux(frame);
  const double scaled_flux = extractor().flux(scaled);
  CHECK(scaled_flux == doctest::Approx(16.0 * flux).epsilon(1e-9));
}

TEST_CASE("feature names are canonical") {
  const auto& names = FeatureExtractor::feature_names();
  CHECK(names[0] == "flat_1");
  CHECK(names[24] == "flat_25");
  CHECK(names[25] == "AudioSpectrumCentroid");
  CHECK(names[27] == "Energy");
  CHECK(names[28] == "MFCC_1");
  CHECK(names[40] == "MFCC_13");
  CHECK(names[41] == "ZeroCrossingRate");
  CHECK(names[42] == "RollOff");
  CHECK(names[43] == "LinCentroid");
  CHECK(names[44] == "LinSpread");
  CHECK(names[45] == "delta_flat_1");
  CHECK(names[89] == "delta_LinSpread");
  CHECK(names[90] == "Flux");
}
