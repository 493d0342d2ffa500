// mlferns/rng.hpp
//
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef MLFERNS_RNG_HPP
#define MLFERNS_RNG_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace mlferns {

// SplitMix64 finalizer; used for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// Derives the seed of sub-stream `tag` from a parent seed. Every component
// that needs schedule-independent randomness (one stream per fern, per
// battery class, per synthesized example) derives its own stream through
// this function, so results do not depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
  return mix64(parent ^ ((tag + 1) * 0x9E3779B97F4A7C15ULL));
}

// xoshiro256++ (Blackman & Vigna), seeded via SplitMix64. Chosen over the
// standard-library engines because the draw helpers below are fully
// specified here, giving identical streams on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    SplitMix64 sm(seed);
    s_[0] = sm.next();
    s_[1] = sm.next();
    s_[2] = sm.next();
    s_[3] = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 significant bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1].
  double uniform01_open_low() { return 1.0 - uniform01(); }

  // Uniform over [lo, hi]; returns lo exactly when lo == hi.
  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // Uniform integer in [0, bound). Bitmask rejection, unbiased.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t mask =
        bound == 1 ? 0 : ~std::uint64_t{0} >> std::countl_zero(bound - 1);
    for (;;) {
      const std::uint64_t v = next() & mask;
      if (v < bound) return v;
    }
  }

  // Child stream `tag`; independent of this stream's future output.
  Rng substream(std::uint64_t tag) const { return Rng(derive_seed(seed_, tag)); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace mlferns

#endif  // MLFERNS_RNG_HPP
