#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace meclab {

// splitmix64 finalizer; used to derive independent stream seeds from a
// master seed plus coordinates (episode, slot, role, ...).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix64(base);
  s = mix64(s ^ (a + 0x100000001b3ULL));
  s = mix64(s ^ (b + 0x1000193ULL));
  s = mix64(s ^ (c + 0x811c9dc5ULL));
  return s;
}

// Deterministic random stream. Distribution helpers are hand-rolled on top
// of the raw engine bits so the sequences are identical across standard
// library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1)
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // (0, 1)
  double open01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // [0, n), unbiased enough for the n used here (Lemire multiply-shift).
  std::size_t uniform_index(std::size_t n) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(engine_()) * n;
    return static_cast<std::size_t>(wide >> 64);
  }

  // [lo, hi] inclusive
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform_index(
                    static_cast<std::size_t>(hi - lo) + 1));
  }

  // Box-Muller without caching so the draw count per call is fixed.
  double normal() {
    const double u1 = open01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Standard Gumbel(0, 1)
  double gumbel() { return -std::log(-std::log(open01())); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace meclab
