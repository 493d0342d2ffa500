// src/dft.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/dft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace mlferns {

namespace {
// FFTW plan creation/destruction is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealDft::RealDft(std::size_t length) : length_(length), plan_(nullptr) {
  if (length == 0) throw std::invalid_argument("DFT length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_complex* out = fftw_alloc_complex(bins());
  double* in = fftw_alloc_real(length);
  // FFTW_UNALIGNED so new-array execution accepts arbitrary heap buffers.
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(length), in, out,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  if (plan_ == nullptr) throw std::runtime_error("FFTW plan creation failed");
}

RealDft::~RealDft() {
  if (plan_ != nullptr) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

RealDft::RealDft(RealDft&& other) noexcept : length_(other.length_), plan_(other.plan_) {
  other.plan_ = nullptr;
}

void RealDft::transform(double* in, double* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_), in,
                       reinterpret_cast<fftw_complex*>(out));
}

}  // namespace mlferns
