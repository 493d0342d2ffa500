// src/features.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/features.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mlferns/kernels.hpp"

namespace mlferns {

namespace {

constexpr double kNyquist = 22050.0;
constexpr std::size_t kFlatnessBands = 25;   // lowest 25 of 32 quarter-octave bands
constexpr double kFlatnessLowEdge = 250.0;   // Hz
constexpr double kCentroidLowEdge = 62.5;    // Hz; lower bins pooled at 31.25 Hz
constexpr double kCentroidPoolHz = 31.25;
constexpr std::size_t kMelFilters = 24;
constexpr std::size_t kMfccKept = 12;        // plus log energy as the 13th
constexpr double kRollOffFraction = 0.85;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

struct FrameScratch {
  std::vector<double> windowed;
  std::vector<double> spectrum;  // interleaved complex
  std::vector<double> power;
  std::vector<double> mag_a;
  std::vector<double> mag_b;
  std::vector<double> mel_energies;
};

FrameScratch& scratch_for() {
  thread_local FrameScratch s;
  return s;
}

}  // namespace

std::vector<Frame> frame_stream(const AudioSignal& signal) {
  std::vector<Frame> frames;
  const std::size_t n = signal.samples.size();
  if (n < kFrameSamples) return frames;
  frames.reserve((n - kFrameSamples) / kHopSamples + 1);
  for (std::size_t offset = 0; offset + kFrameSamples <= n; offset += kHopSamples) {
    frames.push_back(Frame{{signal.samples.data() + offset, kFrameSamples},
                           static_cast<double>(offset) / kSampleRate});
  }
  return frames;
}

FeatureExtractor::Config::Config(std::size_t len)
    : length(len), dft(len), bin_hz(static_cast<double>(kSampleRate) / static_cast<double>(len)) {
  const std::size_t bins = len / 2 + 1;

  window.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    window[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                       static_cast<double>(len - 1));
  }

  // Quarter-octave bands ascending from 250 Hz; bin b sits at f = b*bin_hz.
  flatness_bands.resize(kFlatnessBands);
  for (std::size_t k = 0; k < kFlatnessBands; ++k) {
    const double lo = kFlatnessLowEdge * std::pow(2.0, static_cast<double>(k) / 4.0);
    const double hi = kFlatnessLowEdge * std::pow(2.0, static_cast<double>(k + 1) / 4.0);
    std::uint32_t b = 1;
    while (b * bin_hz < lo) ++b;
    std::uint32_t e = b;
    while (e < bins && e * bin_hz < hi) ++e;
    if (b >= e) throw std::logic_error("empty flatness band");
    flatness_bands[k] = {b, e};
  }

  centroid_pool_bins = 0;
  while (centroid_pool_bins < bins && centroid_pool_bins * bin_hz < kCentroidLowEdge) {
    ++centroid_pool_bins;
  }
  log2_freq.resize(bins);
  log2_freq[0] = std::log2(kCentroidPoolHz / 1000.0);
  for (std::size_t b = 1; b < bins; ++b) {
    log2_freq[b] = b < centroid_pool_bins ? log2_freq[0]
                                          : std::log2(b * bin_hz / 1000.0);
  }

  // 24 triangular filters, equally spaced on the mel scale over 0..Nyquist.
  const double mel_max = hz_to_mel(kNyquist);
  std::vector<double> edges(kMelFilters + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_max * static_cast<double>(i) / (kMelFilters + 1));
  }
  mel.resize(kMelFilters);
  for (std::size_t m = 0; m < kMelFilters; ++m) {
    const double left = edges[m];
    const double center = edges[m + 1];
    const double right = edges[m + 2];
    std::uint32_t first = 0;
    std::vector<double> weights;
    for (std::uint32_t b = 0; b < bins; ++b) {
      const double f = b * bin_hz;
      double w = 0.0;
      if (f > left && f < center) {
        w = (f - left) / (center - left);
      } else if (f >= center && f < right) {
        w = (right - f) / (right - center);
      }
      if (w > 0.0) {
        if (weights.empty()) first = b;
        weights.push_back(w);
      } else if (!weights.empty()) {
        break;
      }
    }
    mel[m] = MelFilter{first, std::move(weights)};
  }

  // Orthonormal DCT-II rows 1..12 over 24 filter energies.
  dct.resize(kMfccKept * kMelFilters);
  const double scale = std::sqrt(2.0 / static_cast<double>(kMelFilters));
  for (std::size_t j = 1; j <= kMfccKept; ++j) {
    for (std::size_t m = 0; m < kMelFilters; ++m) {
      dct[(j - 1) * kMelFilters + m] =
          scale * std::cos(std::numbers::pi * static_cast<double>(j) *
                           (static_cast<double>(m) + 0.5) / static_cast<double>(kMelFilters));
    }
  }
}

FeatureExtractor::FeatureExtractor() : main_(kFrameSamples), sub_(kSubFrameSamples) {}

// Windows raw and fills power and magnitudes for cfg's length.
void FeatureExtractor::analyze(const Config& cfg, std::span<const double> raw,
                               std::vector<double>& power,
                               std::vector<double>& magnitudes) {
  FrameScratch& s = scratch_for();
  const std::size_t n = cfg.length;
  const std::size_t bins = n / 2 + 1;
  s.windowed.resize(n);
  s.spectrum.resize(2 * bins);
  power.resize(bins);
  magnitudes.resize(bins);
  kernels::multiply(raw.data(), cfg.window.data(), s.windowed.data(), n);
  cfg.dft.transform(s.windowed.data(), s.spectrum.data());
  kernels::complex_power(s.spectrum.data(), power.data(), bins);
  for (std::size_t b = 0; b < bins; ++b) magnitudes[b] = std::sqrt(power[b]);
}

void FeatureExtractor::descriptors_from(const Config& cfg, std::span<const double> power,
                                        std::span<const double> magnitudes,
                                        std::span<const double> raw, double* out) {
  FrameScratch& s = scratch_for();
  const std::size_t n = cfg.length;
  const std::size_t bins = power.size();
  s.mel_energies.resize(kMelFilters);

  std::size_t idx = 0;

  // flat_1..flat_25: geometric over arithmetic mean of band power.
  for (const Band& band : cfg.flatness_bands) {
    double log_sum = 0.0;
    double lin_sum = 0.0;
    const std::size_t count = band.end - band.begin;
    for (std::uint32_t b = band.begin; b < band.end; ++b) {
      const double p = std::max(power[b], kLogFloor);
      log_sum += std::log(p);
      lin_sum += p;
    }
    const double geo = std::exp(log_sum / static_cast<double>(count));
    const double arith = lin_sum / static_cast<double>(count);
    out[idx++] = std::min(1.0, geo / arith);  // AM-GM bound, up to rounding
  }

  // AudioSpectrumCentroid / AudioSpectrumSpread on the octave scale, bins
  // below 62.5 Hz pooled at 31.25 Hz.
  {
    double total = 0.0;
    double weighted = 0.0;
    double pooled = 0.0;
    for (std::size_t b = 0; b < cfg.centroid_pool_bins; ++b) pooled += power[b];
    total += pooled;
    weighted += pooled * cfg.log2_freq[0];
    for (std::size_t b = cfg.centroid_pool_bins; b < bins; ++b) {
      total += power[b];
      weighted += power[b] * cfg.log2_freq[b];
    }
    const double denom = std::max(total, kLogFloor);
    const double centroid = weighted / denom;
    double spread_acc = pooled * (cfg.log2_freq[0] - centroid) * (cfg.log2_freq[0] - centroid);
    for (std::size_t b = cfg.centroid_pool_bins; b < bins; ++b) {
      const double d = cfg.log2_freq[b] - centroid;
      spread_acc += power[b] * d * d;
    }
    out[idx++] = centroid;
    out[idx++] = std::sqrt(spread_acc / denom);
  }

  // Energy: log of total spectral power.
  {
    double total = 0.0;
    for (std::size_t b = 0; b < bins; ++b) total += power[b];
    out[idx++] = std::log(std::max(total, kLogFloor));
  }

  // MFCC 1..12 from 24 mel filter log-energies, plus log time-domain
  // energy as the 13th.
  {
    for (std::size_t m = 0; m < kMelFilters; ++m) {
      const MelFilter& f = cfg.mel[m];
      const double e =
          kernels::dot(power.data() + f.first_bin, f.weights.data(), f.weights.size());
      s.mel_energies[m] = std::log(std::max(e, kLogFloor));
    }
    for (std::size_t j = 0; j < kMfccKept; ++j) {
      out[idx++] = kernels::dot(cfg.dct.data() + j * kMelFilters, s.mel_energies.data(),
                                kMelFilters);
    }
    const double frame_energy = kernels::sum_squares(raw.data(), n);
    out[idx++] = std::log(std::max(frame_energy, kLogFloor));
  }

  // ZeroCrossingRate: sign flips per sample over the raw frame.
  {
    std::size_t crossings = 0;
    for (std::size_t i = 1; i < n; ++i) {
      crossings += (raw[i - 1] < 0.0) != (raw[i] < 0.0);
    }
    out[idx++] = static_cast<double>(crossings) / static_cast<double>(n);
  }

  // RollOff: lowest frequency holding 85% of accumulated magnitude (DC
  // excluded); 0 for silence.
  {
    double total = 0.0;
    for (std::size_t b = 1; b < bins; ++b) total += magnitudes[b];
    if (total <= kLogFloor) {
      out[idx++] = 0.0;
    } else {
      const double target = kRollOffFraction * total;
      double acc = 0.0;
      std::size_t b = 1;
      for (; b < bins; ++b) {
        acc += magnitudes[b];
        if (acc >= target) break;
      }
      out[idx++] = static_cast<double>(std::min(b, bins - 1)) * cfg.bin_hz;
    }
  }

  // LinCentroid / LinSpread over Hz (DC excluded).
  {
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t b = 1; b < bins; ++b) {
      total += power[b];
      weighted += power[b] * (static_cast<double>(b) * cfg.bin_hz);
    }
    const double denom = std::max(total, kLogFloor);
    const double centroid = weighted / denom;
    double spread_acc = 0.0;
    for (std::size_t b = 1; b < bins; ++b) {
      const double d = static_cast<double>(b) * cfg.bin_hz - centroid;
      spread_acc += power[b] * d * d;
    }
    out[idx++] = centroid;
    out[idx++] = std::sqrt(spread_acc / denom);
  }

  if (idx != kBaseFeatureCount) throw std::logic_error("descriptor count mismatch");
}

void FeatureExtractor::featurize(std::span<const double> frame, std::span<double> out) const {
  if (frame.size() != kFrameSamples) throw std::invalid_argument("frame must be 1764 samples");
  if (out.size() != kFeatureCount) throw std::invalid_argument("output must have 91 entries");
  FrameScratch& s = scratch_for();

  analyze(main_, frame, s.power, s.mag_a);
  descriptors_from(main_, s.power, s.mag_a, frame, out.data());

  const std::span<const double> sub_a = frame.subspan(0, kSubFrameSamples);
  const std::span<const double> sub_b = frame.subspan(kSubFrameOffset, kSubFrameSamples);
  double base_a[kBaseFeatureCount];
  analyze(sub_, sub_a, s.power, s.mag_a);
  descriptors_from(sub_, s.power, s.mag_a, sub_a, base_a);
  analyze(sub_, sub_b, s.power, s.mag_b);
  descriptors_from(sub_, s.power, s.mag_b, sub_b, out.data() + kBaseFeatureCount);
  for (std::size_t i = 0; i < kBaseFeatureCount; ++i) {
    out[kBaseFeatureCount + i] -= base_a[i];
  }

  out[2 * kBaseFeatureCount] =
      kernels::sum_squared_diff(s.mag_b.data(), s.mag_a.data(), s.mag_a.size());
}

std::vector<double> FeatureExtractor::featurize(std::span<const double> frame) const {
  std::vector<double> out(kFeatureCount);
  featurize(frame, out);
  return out;
}

PowerSpectrum FeatureExtractor::power_spectrum(std::span<const double> frame) const {
  if (frame.size() != kFrameSamples) throw std::invalid_argument("frame must be 1764 samples");
  FrameScratch& s = scratch_for();
  PowerSpectrum spec;
  spec.bin_hz = main_.bin_hz;
  analyze(main_, frame, spec.power, s.mag_a);
  return spec;
}

void FeatureExtractor::base_descriptors(const PowerSpectrum& spectrum,
                                        std::span<const double> frame,
                                        std::span<double> out) const {
  if (frame.size() != kFrameSamples) throw std::invalid_argument("frame must be 1764 samples");
  if (out.size() != kBaseFeatureCount) throw std::invalid_argument("output must have 45 entries");
  if (spectrum.power.size() != kFrameSamples / 2 + 1 || spectrum.bin_hz != main_.bin_hz) {
    throw std::invalid_argument("power spectrum does not match a 40 ms frame");
  }
  FrameScratch& s = scratch_for();
  s.mag_a.resize(spectrum.power.size());
  for (std::size_t b = 0; b < spectrum.power.size(); ++b) {
    s.mag_a[b] = std::sqrt(spectrum.power[b]);
  }
  descriptors_from(main_, spectrum.power, s.mag_a, frame, out.data());
}

std::vector<double> FeatureExtractor::base_descriptors(std::span<const double> frame) const {
  std::vector<double> out(kBaseFeatureCount);
  base_descriptors(power_spectrum(frame), frame, out);
  return out;
}

std::vector<double> FeatureExtractor::delta_features(std::span<const double> frame) const {
  if (frame.size() != kFrameSamples) throw std::invalid_argument("frame must be 1764 samples");
  FrameScratch& s = scratch_for();
  std::vector<double> out(kBaseFeatureCount);
  double base_a[kBaseFeatureCount];
  const std::span<const double> sub_a = frame.subspan(0, kSubFrameSamples);
  const std::span<const double> sub_b = frame.subspan(kSubFrameOffset, kSubFrameSamples);
  analyze(sub_, sub_a, s.power, s.mag_a);
  descriptors_from(sub_, s.power, s.mag_a, sub_a, base_a);
  analyze(sub_, sub_b, s.power, s.mag_b);
  descriptors_from(sub_, s.power, s.mag_b, sub_b, out.data());
  for (std::size_t i = 0; i < kBaseFeatureCount; ++i) out[i] -= base_a[i];
  return out;
}

double FeatureExtractor::flux(std::span<const double> frame) const {
  if (frame.size() != kFrameSamples) throw std::invalid_argument("frame must be 1764 samples");
  FrameScratch& s = scratch_for();
  analyze(sub_, frame.subspan(0, kSubFrameSamples), s.power, s.mag_a);
  analyze(sub_, frame.subspan(kSubFrameOffset, kSubFrameSamples), s.power, s.mag_b);
  return kernels::sum_squared_diff(s.mag_b.data(), s.mag_a.data(), s.mag_a.size());
}

const std::array<std::string, kFeatureCount>& FeatureExtractor::feature_names() {
  static const std::array<std::string, kFeatureCount> names = [] {
    std::array<std::string, kFeatureCount> n;
    std::size_t idx = 0;
    std::vector<std::string> base;
    for (std::size_t k = 1; k <= kFlatnessBands; ++k) base.push_back("flat_" + std::to_string(k));
    base.emplace_back("AudioSpectrumCentroid");
    base.emplace_back("AudioSpectrumSpread");
    base.emplace_back("Energy");
    for (std::size_t k = 1; k <= 13; ++k) base.push_back("MFCC_" + std::to_string(k));
    base.emplace_back("ZeroCrossingRate");
    base.emplace_back("RollOff");
    base.emplace_back("LinCentroid");
    base.emplace_back("LinSpread");
    for (const auto& s : base) n[idx++] = s;
    for (const auto& s : base) n[idx++] = "delta_" + s;
    n[idx++] = "Flux";
    return n;
  }();
  return names;
}

}  // namespace mlferns
