#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace saddlekit {

// SplitMix64; used only to expand a 64-bit seed into xoshiro state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

// xoshiro256++ seeded from SplitMix64, with standard normals drawn by the
// Marsaglia polar form of Box-Muller. The stream is fully specified so the
// same seed yields the same numbers on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  // Uniform on (-1, 1).
  double symmetric_uniform();
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  std::optional<double> spare_normal_;
};

}  // namespace saddlekit
