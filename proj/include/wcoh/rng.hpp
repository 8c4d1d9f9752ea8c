#ifndef WCOH_RNG_HPP
#define WCOH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace wcoh::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Identifies one reproducible substream of a seeded generator family.
// Replication r of a Monte Carlo run uses stream index r (times the series
// count), so results are independent of thread scheduling.
struct Stream {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

// xoshiro256++ with splitmix64 state expansion. Deterministic across
// platforms, unlike the standard-library distributions.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(Stream stream) {
    std::uint64_t sm = stream.seed ^ (0xD1B54A32D192ED03ull * (stream.index + 1));
    for (auto& s : s_) s = splitmix64(sm);
  }

  std::uint64_t next() {
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

  // uniform on (0,1]; never 0, so log() is safe
  double uniform01() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  // standard normal via Box-Muller, second value cached
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4]{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace wcoh::rng

#endif
