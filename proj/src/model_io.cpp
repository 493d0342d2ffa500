// src/model_io.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace mlferns {

namespace {

constexpr char kMagic[8] = {'M', 'L', 'F', 'E', 'R', 'N', '0', '1'};
constexpr std::uint8_t kModeBit = 0x01;
constexpr std::uint8_t kPrecisionBit = 0x80;

void put_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_integral_v<T>);
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<unsigned char>(value >> (8 * i));
  }
  put_bytes(out, buf, sizeof(T));
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
void put_f32(std::ostream& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }

void get_bytes(std::istream& in, void* data, std::size_t n) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (in.gcount() != static_cast<std::streamsize>(n)) {
    throw std::runtime_error("model file truncated");
  }
}

template <typename T>
T get_le(std::istream& in) {
  static_assert(std::is_integral_v<T>);
  unsigned char buf[sizeof(T)];
  get_bytes(in, buf, sizeof(T));
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(buf[i]) << (8 * i);
  }
  return value;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }
float get_f32(std::istream& in) { return std::bit_cast<float>(get_le<std::uint32_t>(in)); }

void write_fern(std::ostream& out, const Fern& fern, bool narrow) {
  for (const auto& crit : fern.criteria) {
    put_le(out, crit.feature_index);
    put_f64(out, crit.threshold);
  }
  if (narrow) {
    for (const double v : fern.leaf_values) put_f32(out, static_cast<float>(v));
  } else {
    for (const double v : fern.leaf_values) put_f64(out, v);
  }
}

Fern read_fern(std::istream& in, std::uint32_t depth, std::size_t columns, bool narrow) {
  Fern fern;
  fern.criteria.resize(depth);
  for (auto& crit : fern.criteria) {
    crit.feature_index = get_le<std::uint32_t>(in);
    crit.threshold = get_f64(in);
  }
  const std::size_t count = (std::size_t{1} << depth) * columns;
  fern.leaf_values.resize(count);
  if (narrow) {
    for (double& v : fern.leaf_values) v = static_cast<double>(get_f32(in));
  } else {
    for (double& v : fern.leaf_values) v = get_f64(in);
  }
  return fern;
}

}  // namespace

void save_model(const FernsModel& model, std::ostream& out, const SaveOptions& options) {
  put_bytes(out, kMagic, sizeof(kMagic));
  std::uint8_t mode_byte = model.mode == ModelMode::Battery ? kModeBit : 0;
  if (options.leaf_values_32bit) mode_byte |= kPrecisionBit;
  put_le(out, mode_byte);
  put_le(out, model.fern_count);
  put_le(out, model.depth);
  put_le(out, static_cast<std::uint32_t>(model.classes.size()));
  put_le(out, model.feature_count);
  put_le(out, model.seed);
  for (const auto& name : model.classes) {
    put_le(out, static_cast<std::uint32_t>(name.size()));
    put_bytes(out, name.data(), name.size());
  }
  for (const Fern& fern : model.ferns) {
    write_fern(out, fern, options.leaf_values_32bit);
  }
  if (!out) throw std::runtime_error("model write failed");
}

void save_model(const FernsModel& model, const std::string& path, const SaveOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
  save_model(model, out, options);
  out.close();
  if (!out) throw std::runtime_error("model write failed: " + path);
}

FernsModel load_model(std::istream& in) {
  char magic[8];
  get_bytes(in, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not an MLFERN01 model file");
  }
  const std::uint8_t mode_byte = get_le<std::uint8_t>(in);
  if ((mode_byte & ~(kModeBit | kPrecisionBit)) != 0) {
    throw std::runtime_error("unknown flags in model mode byte");
  }
  const bool narrow = (mode_byte & kPrecisionBit) != 0;

  FernsModel model;
  model.mode = (mode_byte & kModeBit) ? ModelMode::Battery : ModelMode::MultiLabel;
  model.fern_count = get_le<std::uint32_t>(in);
  model.depth = get_le<std::uint32_t>(in);
  const std::uint32_t class_count = get_le<std::uint32_t>(in);
  model.feature_count = get_le<std::uint32_t>(in);
  model.seed = get_le<std::uint64_t>(in);
  if (model.fern_count == 0 || model.depth == 0 || model.depth > 63 || class_count == 0) {
    throw std::runtime_error("model header out of range");
  }
  model.classes.resize(class_count);
  for (auto& name : model.classes) {
    const std::uint32_t len = get_le<std::uint32_t>(in);
    name.resize(len);
    get_bytes(in, name.data(), len);
  }
  const std::size_t blocks =
      model.mode == ModelMode::Battery ? std::size_t{class_count} * model.fern_count
                                       : std::size_t{model.fern_count};
  const std::size_t columns = model.mode == ModelMode::Battery ? 2 : class_count;
  model.ferns.reserve(blocks);
  for (std::size_t i = 0; i < blocks; ++i) {
    model.ferns.push_back(read_fern(in, model.depth, columns, narrow));
  }
  return model;
}

FernsModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  return load_model(in);
}

std::uint64_t serialized_size(const FernsModel& model, const SaveOptions& options) {
  const std::uint64_t leaf_bytes = options.leaf_values_32bit ? 4 : 8;
  std::uint64_t size = 8 + 1 + 4 * 4 + 8;
  for (const auto& name : model.classes) size += 4 + name.size();
  const std::uint64_t per_fern =
      std::uint64_t{model.depth} * 12 + (std::uint64_t{1} << model.depth) *
                                            (model.mode == ModelMode::Battery
                                                 ? 2
                                                 : model.classes.size()) *
                                            leaf_bytes;
  return size + per_fern * model.ferns.size();
}

}  // namespace mlferns
