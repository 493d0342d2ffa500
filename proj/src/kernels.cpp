// src/kernels.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace mlferns::kernels {

namespace {

using detail::KernelTable;

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect_backend() {
  if (detail::neon_table() != nullptr) return Backend::Neon;
  if (detail::avx2_table() != nullptr && cpu_has_avx2()) return Backend::Avx2;
  return Backend::Scalar;
}

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::Avx2:
      return detail::avx2_table();
    case Backend::Neon:
      return detail::neon_table();
    case Backend::Scalar:
      return &detail::scalar_table();
  }
  return nullptr;
}

struct Dispatch {
  Backend backend;
  const KernelTable* table;
};

Dispatch make_dispatch(Backend b) { return Dispatch{b, table_for(b)}; }

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

const KernelTable& active_table() {
  const KernelTable* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    const Dispatch d = make_dispatch(detect_backend());
    g_backend.store(d.backend, std::memory_order_relaxed);
    g_table.store(d.table, std::memory_order_release);
    t = d.table;
  }
  return *t;
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

Backend active_backend() {
  active_table();
  return g_backend.load(std::memory_order_relaxed);
}

void force_backend(Backend b) {
  const KernelTable* t = table_for(b);
  if (t == nullptr || (b == Backend::Avx2 && !cpu_has_avx2())) {
    throw std::runtime_error(std::string("kernel backend not available: ") + backend_name(b));
  }
  g_backend.store(b, std::memory_order_relaxed);
  g_table.store(t, std::memory_order_release);
}

void reset_backend() {
  const Dispatch d = make_dispatch(detect_backend());
  g_backend.store(d.backend, std::memory_order_relaxed);
  g_table.store(d.table, std::memory_order_release);
}

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  active_table().multiply(a, b, out, n);
}

void accumulate(double* acc, const double* row, std::size_t n) {
  active_table().accumulate(acc, row, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  active_table().axpy(a, x, y, n);
}

void scale(double* x, std::size_t n, double a) { active_table().scale(x, n, a); }

void complex_power(const double* re_im, double* power, std::size_t n) {
  active_table().complex_power(re_im, power, n);
}

double dot(const double* a, const double* b, std::size_t n) {
  return active_table().dot(a, b, n);
}

double sum_squares(const double* a, std::size_t n) {
  return active_table().sum_squares(a, n);
}

double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  return active_table().sum_squared_diff(a, b, n);
}

}  // namespace mlferns::kernels
