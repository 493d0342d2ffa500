// mlferns/wav.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_WAV_HPP
#define MLFERNS_WAV_HPP

#include <span>
#include <string>
#include <vector>

namespace mlferns {

struct AudioSignal {
  std::vector<double> samples;  // mono, in [-1, 1]
  double sample_rate = 44100.0;
};

// Reads RIFF/PCM WAV: 16-bit signed, 44100 Hz, mono or stereo (averaged to
// mono). Anything else is rejected; resampling is out of scope.
AudioSignal read_wav(const std::string& path);

// 16-bit mono 44100 Hz writer, used for fixtures and synthetic test audio.
// Samples are clamped to [-1, 1].
void write_wav(const std::string& path, std::span<const double> samples);

}  // namespace mlferns

#endif  // MLFERNS_WAV_HPP
