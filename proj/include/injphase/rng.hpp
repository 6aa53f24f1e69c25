#pragma once

// Counter-based normal deviates. Every draw is a pure function of
// (seed, stream, step, laser), so ensemble members and noise channels can be
// generated in any order, on any thread, with identical results.

#include <array>
#include <cmath>
#include <cstdint>

namespace injphase {

/// Philox4x64-10 block cipher (Salmon et al., SC'11).
struct Philox4x64 {
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  __extension__ using u128 = unsigned __int128;

  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
    const u128 prod = static_cast<u128>(a) * b;
    lo = static_cast<std::uint64_t>(prod);
    hi = static_cast<std::uint64_t>(prod >> 64);
  }

  static Counter single_round(const Counter& c, const Key& k) {
    std::uint64_t lo0, hi0, lo1, hi1;
    mulhilo(kMul0, c[0], lo0, hi0);
    mulhilo(kMul1, c[2], lo1, hi1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Uniform deviate in (0, 1) from the top 53 bits.
inline double to_open_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard-normal triples (W^A, W^B, W^C channels) for one laser per step.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

  std::array<double, 3> normals(std::uint64_t step, std::uint64_t laser) const {
    const auto r = Philox4x64::generate({step, laser, 0, 0}, key_);
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double r0 = std::sqrt(-2.0 * std::log(to_open_unit(r[0])));
    const double a0 = two_pi * to_open_unit(r[1]);
    const double r1 = std::sqrt(-2.0 * std::log(to_open_unit(r[2])));
    const double a1 = two_pi * to_open_unit(r[3]);
    return {r0 * std::cos(a0), r0 * std::sin(a0), r1 * std::cos(a1)};
  }

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t stream() const { return key_[1]; }

 private:
  Philox4x64::Key key_;
};

/// Mixes several indices into one stream id (splitmix64 finalizer).
inline std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace injphase
