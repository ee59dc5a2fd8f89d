#pragma once

#include <cmath>
#include <cstdint>

#include "wavesys/geometry.hpp"

namespace wavesys {

// Deterministic generator (splitmix64 core) so that seeded runs produce
// identical streams on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Box-Muller; one value per call, pair cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  SpaceVec unit_vector(int n) {
    SpaceVec v{};
    double norm = 0;
    do {
      norm = 0;
      for (int i = 0; i < n; ++i) {
        v[i] = gaussian();
        norm += v[i] * v[i];
      }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (int i = 0; i < n; ++i) v[i] /= norm;
    return v;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace wavesys
