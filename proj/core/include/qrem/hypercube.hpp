#pragma once

// Bit-level combinatorics on the Hamming cube {-1,1}^N.
//
// A configuration is stored as an N-bit word: bit j set means spin j is +1.
// Every dense table in the library (energies, state vectors, subset masks)
// is indexed by this word, so configuration k is simply entry k.

#include <cstdint>
#include <functional>
#include <vector>

namespace qrem {

using Word = std::uint64_t;

inline constexpr int kMaxSpins = 30;

class SpinConfiguration {
 public:
  SpinConfiguration(Word bits, int n);

  static SpinConfiguration all_up(int n);
  static SpinConfiguration all_down(int n);

  Word bits() const { return bits_; }
  int n() const { return n_; }

  // +1 or -1.
  int spin(int j) const;

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

 private:
  Word bits_;
  int n_;
};

// Throws InvalidArgument unless 2 <= n <= kMaxSpins.
void check_spin_count(int n);

inline Word full_word(int n) { return (Word{1} << n) - 1; }
inline std::size_t cube_size(int n) { return std::size_t{1} << n; }

int hamming_distance(const SpinConfiguration& a, const SpinConfiguration& b);
double overlap(const SpinConfiguration& a, const SpinConfiguration& b);
SpinConfiguration flip(const SpinConfiguration& a, int j);

// Dense membership bitset over all 2^N configurations.
class SubsetMask {
 public:
  explicit SubsetMask(int n);

  static SubsetMask full(int n);
  static SubsetMask from_members(int n, const std::vector<Word>& members);

  int n() const { return n_; }
  std::size_t universe_size() const { return cube_size(n_); }

  bool contains(Word w) const { return (words_[w >> 6] >> (w & 63)) & 1U; }
  void insert(Word w) { words_[w >> 6] |= (std::uint64_t{1} << (w & 63)); }
  void erase(Word w) { words_[w >> 6] &= ~(std::uint64_t{1} << (w & 63)); }

  std::size_t count() const;
  bool empty() const;

  SubsetMask complement() const;
  SubsetMask united(const SubsetMask& other) const;
  SubsetMask intersected(const SubsetMask& other) const;
  bool is_subset_of(const SubsetMask& other) const;

  // Members in increasing word order.
  std::vector<Word> members() const;
  void for_each(const std::function<void(Word)>& fn) const;

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;

 private:
  void clear_padding();

  int n_;
  std::vector<std::uint64_t> words_;
};

// Closed Hamming ball of integer radius.
SubsetMask ball(const SpinConfiguration& center, int radius);

double binomial(int n, int k);

// Sum_{k <= radius} C(n, k).
double ball_cardinality(int n, int radius);

// gamma(r) = -r ln r - (1-r) ln(1-r), extended by continuity to r in {0, 1}.
double binary_entropy(double r);

// e^{n gamma(r)} for 0 <= r <= 1/2.
double ball_volume_bound(int n, double r);

}  // namespace qrem
