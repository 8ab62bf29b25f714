#include "qrem/rng.hpp"

#include <cmath>
#include <numbers>

namespace qrem {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53U;
constexpr std::uint32_t kMul1 = 0xCD9E8D57U;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9U;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85U;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

PhiloxBlock philox4x32(std::uint64_t key, const PhiloxBlock& counter) {
  PhiloxBlock c = counter;
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return c;
}

PhiloxBlock CounterRng::block(Stream stream, std::uint64_t index, std::uint32_t lane) const {
  return philox4x32(seed_, {static_cast<std::uint32_t>(index),
                            static_cast<std::uint32_t>(index >> 32), lane,
                            static_cast<std::uint32_t>(stream)});
}

double CounterRng::uniform(Stream stream, std::uint64_t index, std::uint32_t lane) const {
  const auto b = block(stream, index, lane);
  return to_unit(b[0], b[1]);
}

double CounterRng::gaussian(Stream stream, std::uint64_t index, std::uint32_t lane) const {
  const auto b = block(stream, index, lane);
  const double u1 = to_unit(b[0], b[1]);
  const double u2 = to_unit(b[2], b[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::rademacher(std::uint32_t probe, std::uint64_t i) const {
  const auto b = block(Stream::Probes, i >> 7, probe);
  const unsigned bit = static_cast<unsigned>(i & 127);
  return ((b[bit >> 5] >> (bit & 31)) & 1U) ? 1.0 : -1.0;
}

}  // namespace qrem
