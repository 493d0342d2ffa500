// tests/test_kernels.cpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "mlferns/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "mlferns/rng.hpp"

namespace k = mlferns::kernels;

namespace {

std::vector<double> random_vector(mlferns::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-3.0, 3.0);
  return v;
}

// Sizes around and below the SIMD widths plus larger odd/even blocks.
const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 63, 91, 256, 883, 1764};

struct ForcedBackend {
  explicit ForcedBackend(k::Backend b) { k::force_backend(b); }
  ~ForcedBackend() { k::reset_backend(); }
};

}  // namespace

TEST_CASE("dispatched backend is usable and nameable") {
  const k::Backend b = k::active_backend();
  CHECK(k::backend_name(b) != nullptr);
  // Scalar can always be forced.
  ForcedBackend forced(k::Backend::Scalar);
  CHECK(k::active_backend() == k::Backend::Scalar);
}

TEST_CASE("SIMD variants match the scalar reference") {
  const k::Backend simd = [] {
    k::reset_backend();
    return k::active_backend();
  }();
  if (simd == k::Backend::Scalar) return;  // nothing to compare on this host

  mlferns::Rng rng(2024);
  for (const std::size_t n : kSizes) {
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, n);

    // Lane-parallel kernels: bit-exact across backends.
    std::vector<double> out_scalar(n), out_simd(n);
    {
      ForcedBackend f(k::Backend::Scalar);
      k::multiply(a.data(), b.data(), out_scalar.data(), n);
    }
    k::multiply(a.data(), b.data(), out_simd.data(), n);
    CHECK(out_scalar == out_simd);

    std::vector<double> acc_scalar = b, acc_simd = b;
    {
      ForcedBackend f(k::Backend::Scalar);
      k::accumulate(acc_scalar.data(), a.data(), n);
      k::axpy(1.7, a.data(), acc_scalar.data(), n);
      k::scale(acc_scalar.data(), n, 0.3);
    }
    k::accumulate(acc_simd.data(), a.data(), n);
    k::axpy(1.7, a.data(), acc_simd.data(), n);
    k::scale(acc_simd.data(), n, 0.3);
    CHECK(acc_scalar == acc_simd);

    const auto interleaved = random_vector(rng, 2 * n);
    std::vector<double> pow_scalar(n), pow_simd(n);
    {
      ForcedBackend f(k::Backend::Scalar);
      k::complex_power(interleaved.data(), pow_scalar.data(), n);
    }
    k::complex_power(interleaved.data(), pow_simd.data(), n);
    CHECK(pow_scalar == pow_simd);

    // Reductions: tolerance equivalence (partial sums reassociate).
    double dot_scalar, ss_scalar, ssd_scalar;
    {
      ForcedBackend f(k::Backend::Scalar);
      dot_scalar = k::dot(a.data(), b.data(), n);
      ss_scalar = k::sum_squares(a.data(), n);
      ssd_scalar = k::sum_squared_diff(a.data(), b.data(), n);
    }
    const double tol = 1e-12 * (1.0 + static_cast<double>(n));
    CHECK(k::dot(a.data(), b.data(), n) == doctest::Approx(dot_scalar).epsilon(tol));
    CHECK(k::sum_squares(a.data(), n) == doctest::Approx(ss_scalar).epsilon(tol));
    CHECK(k::sum_squared_diff(a.data(), b.data(), n) ==
          doctest::Approx(ssd_scalar).epsilon(tol));
  }
}

TEST_CASE("kernel semantics on small hand cases") {
  const double a[] = {1.0, 2.0, 3.0, 4.0, 5.0};
  const double b[] = {2.0, 0.5, -1.0, 3.0, 0.0};

  double out[5];
  k::multiply(a, b, out, 5);
  CHECK(out[0] == 2.0);
  CHECK(out[2] == -3.0);

  double acc[5] = {1, 1, 1, 1, 1};
  k::accumulate(acc, a, 5);
  CHECK(acc[4] == 6.0);

  double y[5] = {0, 0, 0, 0, 0};
  k::axpy(2.0, a, y, 5);
  CHECK(y[3] == 8.0);

  k::scale(y, 5, 0.5);
  CHECK(y[3] == 4.0);

  const double c[] = {3.0, 4.0, 1.0, 0.0};  // two complex bins
  double p[2];
  k::complex_power(c, p, 2);
  CHECK(p[0] == 25.0);
  CHECK(p[1] == 1.0);

  CHECK(k::dot(a, b, 5) == doctest::Approx(1.0 * 2 + 2 * 0.5 + 3 * -1 + 4 * 3 + 0));
  CHECK(k::sum_squares(a, 5) == doctest::Approx(55.0));
  CHECK(k::sum_squared_diff(a, b, 5) ==
        doctest::Approx(1.0 + 2.25 + 16.0 + 1.0 + 25.0));
}
