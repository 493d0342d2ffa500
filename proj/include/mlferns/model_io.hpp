// mlferns/model_io.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_MODEL_IO_HPP
#define MLFERNS_MODEL_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mlferns/ferns.hpp"

// MLFERN01 model file, little-endian:
//   magic "MLFERN01"
//   mode byte: bit 0 = mode (0 multi-label, 1 battery),
//              bit 7 = leaf precision (0 = 64-bit, 1 = 32-bit floats)
//   K, D, C, feature_count as uint32; seed as uint64
//   C class names, each uint32 byte length + UTF-8 bytes
//   fern blocks: D x (feature_index uint32, threshold float64), then the
//   leaf table (2^D rows; C columns in multi-label mode, 2 in battery).
//   Multi-label: K blocks. Battery: C groups of K blocks, class-major.

namespace mlferns {

struct SaveOptions {
  bool leaf_values_32bit = false;  // size-benchmarking option, lossy
};

void save_model(const FernsModel& model, std::ostream& out, const SaveOptions& options = {});
void save_model(const FernsModel& model, const std::string& path, const SaveOptions& options = {});

FernsModel load_model(std::istream& in);
FernsModel load_model(const std::string& path);

// Exact size in bytes of the serialized form.
std::uint64_t serialized_size(const FernsModel& model, const SaveOptions& options = {});

}  // namespace mlferns

#endif  // MLFERNS_MODEL_IO_HPP
