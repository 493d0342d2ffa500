// tests/test_wav.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/wav.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>

using namespace mlferns;

namespace {

struct TempFile {
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
  std::string path;
};

void put16(std::ofstream& out, std::uint16_t v) {
  out.put(static_cast<char>(v & 0xff));
  out.put(static_cast<char>(v >> 8));
}

void put32(std::ofstream& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v & 0xffff));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}

void write_raw_wav(const std::string& path, std::uint16_t channels, std::uint32_t rate,
                   std::uint16_t bits, const std::vector<std::int16_t>& interleaved) {
  std::ofstream out(path, std::ios::binary);
  const std::uint32_t data_len = static_cast<std::uint32_t>(interleaved.size() * 2);
  out.write("RIFF", 4);
  put32(out, 36 + data_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put32(out, 16);
  put16(out, 1);
  put16(out, channels);
  put32(out, rate);
  put32(out, rate * channels * 2);
  put16(out, static_cast<std::uint16_t>(channels * 2));
  put16(out, bits);
  out.write("data", 4);
  put32(out, data_len);
  for (const std::int16_t s : interleaved) put16(out, static_cast<std::uint16_t>(s));
}

}  // namespace

TEST_CASE("mono WAV write/read round trip") {
  TempFile file("wav_test_mono.wav");
  std::vector<double> samples(4410);
  for (std::size_t t = 0; t < samples.size(); ++t) {
    samples[t] = 0.5 * std::sin(2.0 * M_PI * 440.0 * static_cast<double>(t) / 44100.0);
  }
  write_wav(file.path, samples);
  const AudioSignal back = read_wav(file.path);
  REQUIRE(back.samples.size() == samples.size());
  for (std::size_t t = 0; t < samples.size(); ++t) {
    CHECK(back.samples[t] == doctest::Approx(samples[t]).epsilon(0).scale(1).epsilon(1.0 / 32768));
  }
}

TEST_CASE("stereo input is averaged per sample") {
  TempFile file("wav_test_stereo.wav");
  // L = 16384 (0.5), R = -16384 (-0.5): average 0; then L=R=8192 -> 0.25
  write_raw_wav(file.path, 2, 44100, 16, {16384, -16384, 8192, 8192});
  const AudioSignal signal = read_wav(file.path);
  REQUIRE(signal.samples.size() == 2);
  CHECK(signal.samples[0] == doctest::Approx(0.0));
  CHECK(signal.samples[1] == doctest::Approx(0.25));
}

TEST_CASE("unsupported formats are rejected with clear errors") {
  TempFile file("wav_test_bad.wav");
  write_raw_wav(file.path, 1, 48000, 16, {0, 0});
  CHECK_THROWS_WITH(read_wav(file.path), doctest::Contains("44100"));

  write_raw_wav(file.path, 4, 44100, 16, {0, 0, 0, 0});
  CHECK_THROWS_WITH(read_wav(file.path), doctest::Contains("channel"));

  {
    std::ofstream out(file.path, std::ios::binary);
    out << "garbage";
  }
  CHECK_THROWS(read_wav(file.path));

  CHECK_THROWS(read_wav("wav_test_does_not_exist.wav"));
}
