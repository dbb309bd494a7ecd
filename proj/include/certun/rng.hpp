#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace certun {

/// Seeded random source whose output is fully specified, so that certified
/// parameters and synthetic graphs reproduce bit-for-bit across standard
/// libraries (std::normal_distribution is implementation-defined).
///
/// Engine: std::mt19937_64 (sequence fixed by the standard).
/// Uniform: top 53 bits of one engine draw, scaled by 2^-53, in [0, 1).
/// Normal: Marsaglia polar method. Pairs (u, v) = 2*uniform - 1 are drawn
/// until 0 < s = u^2 + v^2 < 1; the two outputs u*f and v*f with
/// f = sqrt(-2 ln s / s) are returned in that order, the second cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n) by rejection on the raw 64-bit draw.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

}  // namespace certun
