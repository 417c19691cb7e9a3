#pragma once

// Counter-based deterministic randomness: every innovation value is a pure
// function of (seed, stream, lattice site), so draws are reproducible
// independently of evaluation order, window size, or thread count.

#include <cmath>
#include <cstdint>

#include "lilab/lattice.hpp"

namespace lilab {

inline std::uint64_t mix64(std::uint64_t x) {
  // SplitMix64 finalizer.
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Hash of (seed, stream, site); streams separate independent draw families
// (e.g. per-axis innovation sequences).
inline std::uint64_t hash_site(std::uint64_t seed, std::uint64_t stream,
                               const Index& site) {
  std::uint64_t h = mix64(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  for (std::size_t q = 0; q < site.size(); ++q) {
    const auto c = static_cast<std::uint64_t>(site[q]);
    h = mix64(h ^ (c + 0x9E3779B97F4A7C15ULL * (q + 1)));
  }
  return h;
}

// Uniform in (0, 1]: never returns 0, safe under a logarithm.
inline double to_unit_positive(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

// Uniform in [0, 1).
inline double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Standard normal from one counter value (Box-Muller on two derived uniforms).
inline double gaussian_from_hash(std::uint64_t h) {
  const double u1 = to_unit_positive(h);
  const double u2 = to_unit(mix64(h ^ 0xA0761D6478BD642FULL));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Child seed for a replication index, decorrelated from the master stream.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t replication) {
  return mix64(master ^ (0x2545F4914F6CDD1DULL * (replication + 1)));
}

}  // namespace lilab
