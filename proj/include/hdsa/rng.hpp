#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace hdsa {

/// SplitMix64 finalizer. Used to whiten seeds and to fold stream labels into
/// a master seed.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a hash of a label, for naming substreams.
constexpr std::uint64_t label_hash(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Bit pattern of a double, for keying streams by grid values rather than by
/// grid positions (removing a grid entry must not shift other streams).
inline std::uint64_t bits_of(double x) noexcept {
  return std::bit_cast<std::uint64_t>(x);
}

/// Counter-based substream derivation. The mapping is
///   s_0 = mix64(seed),  s_{j+1} = mix64(s_j ^ part_j)
/// and the final s is the stream seed. Identical on every platform.
inline std::uint64_t derive_stream(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = mix64(seed);
  for (std::uint64_t p : parts) s = mix64(s ^ p);
  return s;
}

/// Inverse standard normal CDF (Wichura's AS 241, double precision rational
/// approximations). Pure arithmetic plus sqrt/log, so draws are reproducible
/// across platforms, unlike std::normal_distribution.
double inverse_normal_cdf(double p);

/// Seedable random stream with portable mappings on top of std::mt19937_64
/// (the engine itself is pinned by the standard; the std::*_distribution
/// adaptors are not, so we do not use them).
class Rng {
public:
  explicit Rng(std::uint64_t stream_seed) : gen_(stream_seed) {}

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via inverse-CDF sampling.
  double normal() { return inverse_normal_cdf(uniform_open()); }

private:
  std::mt19937_64 gen_;
};

}  // namespace hdsa
