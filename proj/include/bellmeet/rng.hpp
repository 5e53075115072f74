#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace bellmeet {

// Counter-based generator: Philox4x64 with 10 rounds.  The word stream is
// identical for a given (key, counter) regardless of how many values were
// drawn before, which is what makes per-restart / per-chunk derived streams
// reproducible at any level of parallelism.  See docs/FORMATS.md for the
// exact constants and the uniform/gaussian mappings.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{seed, stream}, counter_{0, 0, 0, 0}, pos_(4) {}

  // Independent derived stream. Uses a splitmix64 mix of (stream, index) so
  // distinct indices give distinct Philox keys.
  Rng split(std::uint64_t index) const {
    return Rng(key_[0], mix64(key_[1] + 0x9e3779b97f4a7c15ull * (index + 1)));
  }

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      // counter is bumped before each block (first block uses counter 1)
      increment_counter();
      block_ = philox_block(counter_, key_);
      pos_ = 0;
    }
    return block_[pos_++];
  }

  // 53-bit mantissa uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // unbiased integer in [0, n)
  std::uint64_t uniform_below(std::uint64_t n) {
    // rejection from the top of the range
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  // standard normal, Box-Muller (consumes two uniforms per pair)
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  static std::array<std::uint64_t, 4> philox_block(std::array<std::uint64_t, 4> ctr,
                                                   std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      ctr = philox_round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  static std::array<std::uint64_t, 4> philox_round(const std::array<std::uint64_t, 4>& c,
                                                   const std::array<std::uint64_t, 2>& k) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  void increment_counter() {
    for (int i = 0; i < 4; ++i) {
      if (++counter_[i] != 0) break;
    }
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> block_{};
  int pos_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bellmeet
