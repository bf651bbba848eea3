#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace fko {

// Seed mixing for deriving independent stream seeds from one master seed.
inline constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

// Seedable RNG with a recorded generator name. std::mt19937_64 output is
// fully specified by the standard, but std::uniform_int_distribution is
// not, so all bounded draws are done here by rejection to keep results
// bit-identical across platforms.
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64";

  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n) {
    const uint64_t min = (0 - n) % n;  // 2^64 mod n
    uint64_t x = engine_();
    while (x < min) x = engine_();
    return x % n;
  }

  int32_t below_i32(int32_t n) { return static_cast<int32_t>(below(static_cast<uint64_t>(n))); }

  bool coin() { return (engine_() >> 63) != 0; }

  int8_t sign() { return coin() ? int8_t{1} : int8_t{-1}; }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Uniform k-subset of [0, n) via Floyd's algorithm; returned in
  // insertion order, not sorted.
  std::vector<int32_t> sample_distinct(int32_t n, int32_t k);

 private:
  std::mt19937_64 engine_;
};

// FNV-1a, used to fingerprint canonical formula bytes in certificates.
inline uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string to_hex16(uint64_t value);

}  // namespace fko
