// mlferns/kernels.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_KERNELS_HPP
#define MLFERNS_KERNELS_HPP

#include <cstddef>

// Data-parallel inner loops shared by the classifier and the feature
// extractor. Every kernel has a scalar reference implementation plus SIMD
// variants (AVX2 on x86-64, NEON on aarch64) selected once at runtime from
// CPU capabilities. Lane-parallel kernels (multiply, accumulate, axpy,
// scale, complex_power) produce bit-identical results on every backend;
// reduction kernels (dot, sum_squares, sum_squared_diff) may differ in the
// last few ulps because partial sums associate differently.

namespace mlferns::kernels {

enum class Backend { Scalar, Avx2, Neon };

const char* backend_name(Backend b);

// Backend currently used by the dispatched entry points.
Backend active_backend();

// Overrides dispatch; Backend::Scalar is always valid. Requesting a backend
// the CPU does not support throws. Intended for tests and benchmarks.
void force_backend(Backend b);
void reset_backend();

// out[i] = a[i] * b[i]
void multiply(const double* a, const double* b, double* out, std::size_t n);

// acc[i] += row[i]
void accumulate(double* acc, const double* row, std::size_t n);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// x[i] *= a
void scale(double* x, std::size_t n, double a);

// power[i] = re_im[2i]^2 + re_im[2i+1]^2 over n complex bins
void complex_power(const double* re_im, double* power, std::size_t n);

double dot(const double* a, const double* b, std::size_t n);

double sum_squares(const double* a, std::size_t n);

// sum over i of (a[i] - b[i])^2
double sum_squared_diff(const double* a, const double* b, std::size_t n);

namespace detail {

struct KernelTable {
  void (*multiply)(const double*, const double*, double*, std::size_t);
  void (*accumulate)(double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double*, std::size_t, double);
  void (*complex_power)(const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_squares)(const double*, std::size_t);
  double (*sum_squared_diff)(const double*, const double*, std::size_t);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();

}  // namespace detail

}  // namespace mlferns::kernels

#endif  // MLFERNS_KERNELS_HPP
