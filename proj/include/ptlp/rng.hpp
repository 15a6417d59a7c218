#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ptlp::detail {

// Uniform double in [0, 1) from the top 53 bits of the generator output.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal draw via Box-Muller on explicit uniforms. Spelled out
// here (rather than std::normal_distribution) so seeded streams are
// identical across standard-library implementations.
inline double standard_normal(std::mt19937_64& rng) {
  const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;       // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace ptlp::detail
