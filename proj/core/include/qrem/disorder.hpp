#pragma once

// Gaussian energy landscapes U : {-1,1}^N -> R.
//
//   StrictPSpin : sqrt(p!/N^{p-1}) sum_{j1<...<jp} g_J sigma_j1...sigma_jp
//   FullPSpin   : N^{(1-p)/2} sum over all p-tuples (repeats allowed)
//   REM         : sqrt(N) g(sigma), independent per configuration
//
// p-spin tables are built in O(N 2^N): the coupling of subset J is written
// at table index J and a Walsh-Hadamard transform turns the coefficient
// table into sum_J c_J prod_{j in J} sigma_j for every sigma at once.
//
// For FullPSpin a p-tuple contributes the parity of the set S of indices it
// hits an odd number of times. All tuples sharing S are folded into a single
// Gaussian whose variance is the number of such tuples, which gives the
// covariance N r^p exactly.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qrem/hypercube.hpp"

namespace qrem {

inline constexpr int kMaxSampleSpins = 26;

enum class VariantTag : std::uint32_t { StrictPSpin = 0, FullPSpin = 1, REM = 2 };

struct DisorderVariant {
  VariantTag tag = VariantTag::REM;
  int p = 0;  // ignored for REM

  static DisorderVariant strict(int p) { return {VariantTag::StrictPSpin, p}; }
  static DisorderVariant full(int p) { return {VariantTag::FullPSpin, p}; }
  static DisorderVariant rem() { return {VariantTag::REM, 0}; }

  friend bool operator==(const DisorderVariant&, const DisorderVariant&) = default;
};

std::string to_string(VariantTag tag);
VariantTag parse_variant_tag(const std::string& s);

// Checks n against the sampling cap and p against the variant.
void validate_variant(const DisorderVariant& v, int n);

class DisorderRealization {
 public:
  DisorderRealization(DisorderVariant variant, int n, std::uint64_t seed,
                      std::vector<double> energies);

  // Arbitrary table, mainly for tests (variant REM, seed 0).
  static DisorderRealization from_table(int n, std::vector<double> energies);

  const DisorderVariant& variant() const { return variant_; }
  int n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const double> energies() const { return energies_; }
  double energy(Word w) const { return energies_[w]; }

 private:
  DisorderVariant variant_;
  int n_;
  std::uint64_t seed_;
  std::vector<double> energies_;
};

// In-place unnormalised Walsh-Hadamard transform:
// out[x] = sum_y in[y] (-1)^{popcount(x & y)}. Size must be a power of two.
void fast_walsh_hadamard(std::span<double> data);

DisorderRealization sample(const DisorderVariant& variant, int n, std::uint64_t seed);

// Test hook. `coupling(J)` supplies the raw coupling attached to support J:
// g_J for StrictPSpin (|J| = p), the folded tuple sum G_S for FullPSpin
// (|S| <= p, |S| = p mod 2) and g(sigma) for REM. Normalisation is applied
// here exactly as in `sample`.
DisorderRealization sample_with_couplings(const DisorderVariant& variant, int n,
                                          const std::function<double(Word)>& coupling);

// Number of p-tuples over {1..n} whose odd-multiplicity support is one fixed
// set of size s.
double tuple_support_count(int n, int p, int s);

// E[U(sigma) U(tau)] for a pair at Hamming distance d.
double covariance_exact(const DisorderVariant& variant, int n, int d);

// max over the n+1 overlaps of |c_{p,N}(r) - r^p|.
double covariance_convergence_gap(const DisorderVariant& variant, int n);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Monte Carlo E[U(sigma)U(tau)] for sigma = all down, tau = first d spins up,
// over realizations with seeds seed, seed+1, ...
MeanEstimate empirical_covariance(const DisorderVariant& variant, int n, int d,
                                  int num_samples, std::uint64_t seed);

// min_sigma U(sigma) / N.
double ground_state_density(const DisorderRealization& real);

double mean_energy(const DisorderRealization& real);

// Binary export: "QPSG" magic, u32 version, u32 variant tag, u32 p, u32 n,
// u64 seed, then 2^n little-endian IEEE-754 doubles.
void write_realization(const DisorderRealization& real, const std::string& path);
DisorderRealization read_realization(const std::string& path);

std::vector<std::uint8_t> encode_realization(const DisorderRealization& real);
DisorderRealization decode_realization(std::span<const std::uint8_t> bytes);

}  // namespace qrem
