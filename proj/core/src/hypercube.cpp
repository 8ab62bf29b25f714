#include "qrem/hypercube.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qrem/error.hpp"

namespace qrem {

void check_spin_count(int n) {
  if (n < 2 || n > kMaxSpins) {
    throw InvalidArgument("spin count must lie in [2, " + std::to_string(kMaxSpins) +
                          "], got " + std::to_string(n));
  }
}

SpinConfiguration::SpinConfiguration(Word bits, int n) : bits_(bits), n_(n) {
  check_spin_count(n);
  if ((bits & ~full_word(n)) != 0) {
    throw InvalidArgument("configuration word has bits above position N-1");
  }
}

SpinConfiguration SpinConfiguration::all_up(int n) {
  check_spin_count(n);
  return {full_word(n), n};
}

SpinConfiguration SpinConfiguration::all_down(int n) { return {0, n}; }

int SpinConfiguration::spin(int j) const {
  if (j < 0 || j >= n_) throw InvalidArgument("spin index out of range");
  return ((bits_ >> j) & 1U) ? 1 : -1;
}

namespace {

void require_same_n(int a, int b) {
  if (a != b) {
    throw DimensionError("spin counts differ: " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

}  // namespace

int hamming_distance(const SpinConfiguration& a, const SpinConfiguration& b) {
  require_same_n(a.n(), b.n());
  return std::popcount(a.bits() ^ b.bits());
}

double overlap(const SpinConfiguration& a, const SpinConfiguration& b) {
  const int d = hamming_distance(a, b);
  return static_cast<double>(a.n() - 2 * d) / a.n();
}

SpinConfiguration flip(const SpinConfiguration& a, int j) {
  if (j < 0 || j >= a.n()) throw InvalidArgument("flip index out of range");
  return {a.bits() ^ (Word{1} << j), a.n()};
}

// ---------------------------------------------------------------------------

SubsetMask::SubsetMask(int n) : n_(n) {
  check_spin_count(n);
  words_.assign((cube_size(n) + 63) / 64, 0);
}

SubsetMask SubsetMask::full(int n) {
  SubsetMask m(n);
  for (auto& w : m.words_) w = ~std::uint64_t{0};
  m.clear_padding();
  return m;
}

SubsetMask SubsetMask::from_members(int n, const std::vector<Word>& members) {
  SubsetMask m(n);
  const Word limit = cube_size(n);
  for (Word w : members) {
    if (w >= limit) throw InvalidArgument("subset member outside the cube");
    m.insert(w);
  }
  return m;
}

void SubsetMask::clear_padding() {
  const std::size_t size = cube_size(n_);
  if (size % 64 != 0) {
    words_.back() &= (std::uint64_t{1} << (size % 64)) - 1;
  }
}

std::size_t SubsetMask::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool SubsetMask::empty() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

SubsetMask SubsetMask::complement() const {
  SubsetMask out(n_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
  out.clear_padding();
  return out;
}

SubsetMask SubsetMask::united(const SubsetMask& other) const {
  require_same_n(n_, other.n_);
  SubsetMask out(*this);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] |= other.words_[i];
  return out;
}

SubsetMask SubsetMask::intersected(const SubsetMask& other) const {
  require_same_n(n_, other.n_);
  SubsetMask out(*this);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= other.words_[i];
  return out;
}

bool SubsetMask::is_subset_of(const SubsetMask& other) const {
  require_same_n(n_, other.n_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

std::vector<Word> SubsetMask::members() const {
  std::vector<Word> out;
  out.reserve(count());
  for_each([&](Word w) { out.push_back(w); });
  return out;
}

void SubsetMask::for_each(const std::function<void(Word)>& fn) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      const int bit = std::countr_zero(w);
      fn(static_cast<Word>(i * 64 + static_cast<std::size_t>(bit)));
      w &= w - 1;
    }
  }
}

SubsetMask ball(const SpinConfiguration& center, int radius) {
  const int n = center.n();
  if (radius < 0 || radius > n) throw InvalidArgument("ball radius out of range");
  SubsetMask out(n);
  const Word size = cube_size(n);
  for (Word w = 0; w < size; ++w) {
    if (std::popcount(w ^ center.bits()) <= radius) out.insert(w);
  }
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

double ball_cardinality(int n, int radius) {
  double s = 0.0;
  for (int k = 0; k <= std::min(radius, n); ++k) s += binomial(n, k);
  return s;
}

double binary_entropy(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("binary entropy needs r in [0, 1]");
  if (r == 0.0 || r == 1.0) return 0.0;
  return -r * std::log(r) - (1.0 - r) * std::log1p(-r);
}

double ball_volume_bound(int n, double r) {
  if (!(r >= 0.0 && r <= 0.5)) throw InvalidArgument("ball volume bound needs r in [0, 1/2]");
  return std::exp(n * binary_entropy(r));
}

}  // namespace qrem
