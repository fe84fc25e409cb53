#ifndef GRAPEVINE_RNG_HPP
#define GRAPEVINE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace grapevine {

// Self-contained generator so draws are bit-identical across platforms and
// standard libraries. Streams are derived by folding a stream id into the
// seed through splitmix64; xoshiro256++ provides the raw output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed;
    sm ^= 0x9e3779b97f4a7c15ull + (stream << 1);
    sm = mix(sm);
    sm += stream;
    for (auto& word : s_) word = mix(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller; two uniforms per draw, no cached spare
  double normal() {
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t mix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t s_[4];
};

// FNV-1a, used to give each registered model its own dataset stream.
inline std::uint64_t hash64(const char* str) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char* p = str; *p; ++p) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*p));
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace grapevine

#endif
