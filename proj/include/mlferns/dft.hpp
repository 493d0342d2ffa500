// mlferns/dft.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_DFT_HPP
#define MLFERNS_DFT_HPP

#include <cstddef>

namespace mlferns {

// Real-to-complex DFT of a fixed length (backed by FFTW). transform() is
// const and safe to call concurrently with distinct buffers; the plan is
// created unaligned so callers may pass ordinary heap storage.
class RealDft {
 public:
  explicit RealDft(std::size_t length);
  ~RealDft();
  RealDft(const RealDft&) = delete;
  RealDft& operator=(const RealDft&) = delete;
  RealDft(RealDft&& other) noexcept;
  RealDft& operator=(RealDft&&) = delete;

  std::size_t length() const { return length_; }
  std::size_t bins() const { return length_ / 2 + 1; }

  // in: length() samples (clobbered is allowed but not done for r2c);
  // out: bins() complex values, interleaved re,im (2*bins() doubles).
  void transform(double* in, double* out) const;

 private:
  std::size_t length_;
  void* plan_;
};

}  // namespace mlferns

#endif  // MLFERNS_DFT_HPP
