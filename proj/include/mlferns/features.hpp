// mlferns/features.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_FEATURES_HPP
#define MLFERNS_FEATURES_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlferns/dft.hpp"
#include "mlferns/wav.hpp"

namespace mlferns {

inline constexpr std::size_t kSampleRate = 44100;
inline constexpr std::size_t kFrameSamples = 1764;     // 40 ms
inline constexpr std::size_t kHopSamples = 441;        // 10 ms
inline constexpr std::size_t kSubFrameSamples = 1323;  // 30 ms
inline constexpr std::size_t kSubFrameOffset = 441;    // second sub-frame start
inline constexpr std::size_t kBaseFeatureCount = 45;
inline constexpr std::size_t kFeatureCount = 91;       // 45 base + 45 deltas + flux
inline constexpr double kLogFloor = 1e-12;

// A 40 ms view into a longer signal.
struct Frame {
  std::span<const double> samples;  // kFrameSamples long
  double start_time;                // seconds
};

// Frames at offsets 0, 441, 882, ...; the trailing partial frame is
// dropped. Signals shorter than one frame yield an empty stream.
std::vector<Frame> frame_stream(const AudioSignal& signal);

struct PowerSpectrum {
  std::vector<double> power;  // squared magnitudes, bins 0..N/2
  double bin_hz;
};

// Immutable after construction; featurize() is const and safe to call from
// many threads concurrently.
class FeatureExtractor {
 public:
  FeatureExtractor();

  // The 91 features of one 40 ms frame: 45 base descriptors, the 45
  // sub-frame deltas (30 ms at offset 10 ms minus 30 ms at offset 0), and
  // spectral flux between the two sub-frame spectra.
  void featurize(std::span<const double> frame, std::span<double> out) const;
  std::vector<double> featurize(std::span<const double> frame) const;

  // Hamming-windowed power spectrum of a full frame.
  PowerSpectrum power_spectrum(std::span<const double> frame) const;

  // The 45 base descriptors of a full frame (spectrum recomputed from the
  // frame when not supplied).
  void base_descriptors(const PowerSpectrum& spectrum, std::span<const double> frame,
                        std::span<double> out) const;
  std::vector<double> base_descriptors(std::span<const double> frame) const;

  // descriptor(sub-frame B) - descriptor(sub-frame A), base order.
  std::vector<double> delta_features(std::span<const double> frame) const;

  // Sum of squared differences between the two sub-frame magnitude spectra.
  double flux(std::span<const double> frame) const;

  static const std::array<std::string, kFeatureCount>& feature_names();

 private:
  struct MelFilter {
    std::uint32_t first_bin;
    std::vector<double> weights;
  };
  struct Band {
    std::uint32_t begin;
    std::uint32_t end;  // half-open bin range
  };
  // Tables for one analysis length (full frame or sub-frame).
  struct Config {
    explicit Config(std::size_t length);
    std::size_t length;
    RealDft dft;
    double bin_hz;
    std::vector<double> window;              // Hamming
    std::vector<Band> flatness_bands;        // lowest 25 quarter-octave bands
    std::size_t centroid_pool_bins;          // bins below 62.5 Hz, pooled
    std::vector<double> log2_freq;           // log2(f/1000) per bin (pooled value at [0])
    std::vector<MelFilter> mel;              // 24 triangular filters
    std::vector<double> dct;                 // 12 x 24 DCT-II (orthonormal) rows 1..12
  };

  // Windows raw and fills power and (sqrt) magnitudes.
  static void analyze(const Config& cfg, std::span<const double> raw,
                      std::vector<double>& power, std::vector<double>& magnitudes);
  // The 45 descriptors from an analyzed frame.
  static void descriptors_from(const Config& cfg, std::span<const double> power,
                               std::span<const double> magnitudes, std::span<const double> raw,
                               double* out);

  Config main_;
  Config sub_;
};

}  // namespace mlferns

#endif  // MLFERNS_FEATURES_HPP
