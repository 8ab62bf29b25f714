#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "qrem/disorder.hpp"
#include "qrem/error.hpp"

namespace qrem {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'Q', 'P', 'S', 'G'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 4 * 4 + 8;

template <class T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
}

template <class T>
T get_le(std::span<const std::uint8_t> in, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  if (pos + sizeof(U) > in.size()) throw EngineError("realization file truncated");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(in[pos + i]) << (8 * i);
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::vector<std::uint8_t> encode_realization(const DisorderRealization& real) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 8 * real.energies().size());
  for (std::uint8_t c : kMagic) out.push_back(c);
  put_le(out, kVersion);
  put_le(out, static_cast<std::uint32_t>(real.variant().tag));
  put_le(out, static_cast<std::uint32_t>(real.variant().p));
  put_le(out, static_cast<std::uint32_t>(real.n()));
  put_le(out, real.seed());
  for (double e : real.energies()) put_le(out, e);
  return out;
}

DisorderRealization decode_realization(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw EngineError("not a realization file (bad magic)");
  }
  std::size_t pos = 4;
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kVersion) throw EngineError("unsupported realization file version");
  const auto tag = get_le<std::uint32_t>(bytes, pos);
  if (tag > static_cast<std::uint32_t>(VariantTag::REM)) throw EngineError("bad variant tag");
  const auto p = get_le<std::uint32_t>(bytes, pos);
  const auto n = get_le<std::uint32_t>(bytes, pos);
  const auto seed = get_le<std::uint64_t>(bytes, pos);
  if (n < 2 || n > static_cast<std::uint32_t>(kMaxSampleSpins)) {
    throw EngineError("realization file has invalid spin count");
  }
  const std::size_t size = cube_size(static_cast<int>(n));
  if (bytes.size() != kHeaderSize + 8 * size) throw EngineError("realization file has wrong length");
  std::vector<double> energies(size);
  for (auto& e : energies) e = get_le<double>(bytes, pos);
  return {DisorderVariant{static_cast<VariantTag>(tag), static_cast<int>(p)}, static_cast<int>(n),
          seed, std::move(energies)};
}

void write_realization(const DisorderRealization& real, const std::string& path) {
  const auto bytes = encode_realization(real);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EngineError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw EngineError("write failed: " + path);
}

DisorderRealization read_realization(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EngineError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_realization(bytes);
}

}  // namespace qrem
