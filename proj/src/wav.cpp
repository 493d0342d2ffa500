// src/wav.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mlferns {

namespace {

std::uint32_t u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t u16le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32le(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u16le(std::ostream& out, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

AudioSignal read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open WAV file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw std::runtime_error("not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  std::uint16_t format = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_len = u32le(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) {
      throw std::runtime_error("truncated WAV chunk in " + path);
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw std::runtime_error("malformed fmt chunk in " + path);
      format = u16le(bytes.data() + body);
      channels = u16le(bytes.data() + body + 2);
      rate = u32le(bytes.data() + body + 4);
      bits = u16le(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = chunk_len;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr) {
    throw std::runtime_error("WAV file missing fmt or data chunk: " + path);
  }
  if (format != 1) {
    throw std::runtime_error("unsupported WAV encoding (PCM required): " + path);
  }
  if (bits != 16) {
    throw std::runtime_error("unsupported WAV bit depth (16-bit required): " + path);
  }
  if (rate != 44100) {
    throw std::runtime_error("unsupported WAV sample rate (44100 Hz required): " + path);
  }
  if (channels != 1 && channels != 2) {
    throw std::runtime_error("unsupported WAV channel count (1 or 2 required): " + path);
  }

  const std::size_t frames = data_len / (2 * channels);
  AudioSignal signal;
  signal.samples.resize(frames);
  constexpr double scale = 1.0 / 32768.0;
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p = data + i * 2 * channels;
    const auto s0 = static_cast<std::int16_t>(u16le(p));
    if (channels == 1) {
      signal.samples[i] = s0 * scale;
    } else {
      const auto s1 = static_cast<std::int16_t>(u16le(p + 2));
      signal.samples[i] = (s0 * scale + s1 * scale) * 0.5;
    }
  }
  return signal;
}

void write_wav(const std::string& path, std::span<const double> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open WAV file for writing: " + path);
  const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  put_u32le(out, 36 + data_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32le(out, 16);
  put_u16le(out, 1);       // PCM
  put_u16le(out, 1);       // mono
  put_u32le(out, 44100);   // rate
  put_u32le(out, 88200);   // byte rate
  put_u16le(out, 2);       // block align
  put_u16le(out, 16);      // bits
  out.write("data", 4);
  put_u32le(out, data_len);
  for (const double s : samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const auto v = static_cast<std::int16_t>(std::lrint(clamped * 32767.0));
    put_u16le(out, static_cast<std::uint16_t>(v));
  }
  if (!out) throw std::runtime_error("WAV write failed: " + path);
}

}  // namespace mlferns
