#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al., SC'11).
//
// Every draw is a pure function of (seed, stream, index, lane), so tables can
// be filled in any order and on any number of threads with identical output.
//
// Stream layout:
//   Stream::Couplings : Gaussian coupling for the subset (or REM site) whose
//                       bit word is `index`.
//   Stream::Probes    : Rademacher probe vectors; `lane` is the probe number,
//                       `index` the 128-entry block of the vector.
//   Stream::Auxiliary : free for tests and experiment helpers.
//
// Gaussians use the cosine branch of Box-Muller on two 53-bit uniforms in
// (0, 1] taken from the four 32-bit output words.

#include <array>
#include <cstdint>

namespace qrem {

enum class Stream : std::uint32_t { Couplings = 0, Probes = 1, Auxiliary = 2 };

using PhiloxBlock = std::array<std::uint32_t, 4>;

PhiloxBlock philox4x32(std::uint64_t key, const PhiloxBlock& counter);

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  PhiloxBlock block(Stream stream, std::uint64_t index, std::uint32_t lane = 0) const;

  // Uniform in (0, 1].
  double uniform(Stream stream, std::uint64_t index, std::uint32_t lane = 0) const;
  double gaussian(Stream stream, std::uint64_t index, std::uint32_t lane = 0) const;

  // Sign (+1/-1) of entry `i` of probe vector number `probe`.
  double rademacher(std::uint32_t probe, std::uint64_t i) const;

 private:
  std::uint64_t seed_;
};

}  // namespace qrem
