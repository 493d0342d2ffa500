// src/kernels_neon.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/kernels.hpp"

// NEON variants (aarch64, 2 double lanes). Same contract as the AVX2 file:
// lane-parallel kernels avoid FMA, reductions use it.

#if defined(__aarch64__)

#include <arm_neon.h>

namespace mlferns::kernels::detail {

namespace {

void multiply_neon(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void accumulate_neon(double* acc, const double* row, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(row + i)));
  }
  for (; i < n; ++i) acc[i] += row[i];
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t prod = vmulq_f64(av, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_neon(double* x, std::size_t n, double a) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), av));
  }
  for (; i < n; ++i) x[i] *= a;
}

void complex_power_neon(const double* re_im, double* power, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v0 = vld1q_f64(re_im + 2 * i);      // r0 i0
    const float64x2_t v1 = vld1q_f64(re_im + 2 * i + 2);  // r1 i1
    const float64x2_t sq0 = vmulq_f64(v0, v0);
    const float64x2_t sq1 = vmulq_f64(v1, v1);
    vst1q_f64(power + i, vpaddq_f64(sq0, sq1));
  }
  for (; i < n; ++i) {
    const double re = re_im[2 * i];
    const double im = re_im[2 * i + 1];
    power[i] = re * re + im * im;
  }
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_squares_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(a + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

double sum_squared_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table = {
      multiply_neon,   accumulate_neon,  axpy_neon,
      scale_neon,      complex_power_neon, dot_neon,
      sum_squares_neon, sum_squared_diff_neon,
  };
  return &table;
}

}  // namespace mlferns::kernels::detail

#else

namespace mlferns::kernels::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace mlferns::kernels::detail

#endif
