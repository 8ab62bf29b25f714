#include "qrem/disorder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "qrem/error.hpp"
#include "qrem/rng.hpp"

namespace qrem {

std::string to_string(VariantTag tag) {
  switch (tag) {
    case VariantTag::StrictPSpin: return "strict";
    case VariantTag::FullPSpin: return "full";
    case VariantTag::REM: return "rem";
  }
  return "unknown";
}

VariantTag parse_variant_tag(const std::string& s) {
  if (s == "strict") return VariantTag::StrictPSpin;
  if (s == "full") return VariantTag::FullPSpin;
  if (s == "rem") return VariantTag::REM;
  throw InvalidArgument("unknown disorder variant '" + s + "' (expected strict, full or rem)");
}

void validate_variant(const DisorderVariant& v, int n) {
  check_spin_count(n);
  if (n > kMaxSampleSpins) {
    throw InvalidArgument("spin count " + std::to_string(n) + " exceeds the sampling cap of " +
                          std::to_string(kMaxSampleSpins));
  }
  if (v.tag == VariantTag::REM) return;
  if (v.p < 2) throw InvalidArgument("interaction order p must be at least 2");
  if (v.tag == VariantTag::StrictPSpin && v.p > n) {
    throw InvalidArgument("strict p-spin needs p <= N (p=" + std::to_string(v.p) +
                          ", N=" + std::to_string(n) + ")");
  }
}

DisorderRealization::DisorderRealization(DisorderVariant variant, int n, std::uint64_t seed,
                                         std::vector<double> energies)
    : variant_(variant), n_(n), seed_(seed), energies_(std::move(energies)) {
  check_spin_count(n);
  if (energies_.size() != cube_size(n)) {
    throw DimensionError("energy table must have exactly 2^N entries");
  }
}

DisorderRealization DisorderRealization::from_table(int n, std::vector<double> energies) {
  return {DisorderVariant::rem(), n, 0, std::move(energies)};
}

void fast_walsh_hadamard(std::span<double> data) {
  const std::size_t size = data.size();
  if (size == 0 || !std::has_single_bit(size)) {
    throw InvalidArgument("Walsh-Hadamard transform needs a power-of-two length");
  }
  double* a = data.data();
  const auto total = static_cast<std::int64_t>(size / 2);
  for (std::size_t h = 1; h < size; h <<= 1) {
    // Butterfly pairs (i, i+h) enumerated by a flat index so the loop
    // parallelises uniformly at every level.
#pragma omp parallel for schedule(static) if (size >= (std::size_t{1} << 16))
    for (std::int64_t t = 0; t < total; ++t) {
      const auto k = static_cast<std::size_t>(t);
      const std::size_t i = (k / h) * 2 * h + (k % h);
      const double x = a[i];
      const double y = a[i + h];
      a[i] = x + y;
      a[i + h] = x - y;
    }
  }
}

namespace {

// w(s) = N^{1-p} * (number of p-tuples with odd support equal to a fixed
// set of size s), computed from the distribution of the odd-support size of
// a uniformly random tuple to stay in [0, 1].
std::vector<double> full_support_weights(int n, int p) {
  std::vector<double> prob(static_cast<std::size_t>(n) + 1, 0.0);
  prob[0] = 1.0;
  for (int step = 0; step < p; ++step) {
    std::vector<double> next(prob.size(), 0.0);
    for (int k = 0; k <= n; ++k) {
      if (prob[k] == 0.0) continue;
      if (k > 0) next[k - 1] += prob[k] * k / n;
      if (k < n) next[k + 1] += prob[k] * static_cast<double>(n - k) / n;
    }
    prob = std::move(next);
  }
  std::vector<double> w(prob.size(), 0.0);
  for (int s = 0; s <= n; ++s) w[s] = n * prob[s] / binomial(n, s);
  return w;
}

double strict_scale(int n, int p) {
  return std::exp(0.5 * (std::lgamma(p + 1.0) - (p - 1) * std::log(static_cast<double>(n))));
}

double full_scale(int n, int p) { return std::pow(static_cast<double>(n), 0.5 * (1 - p)); }

// Reindex a WHT output (indexed by the set of -1 spins) by configuration word.
void reflect_to_configurations(std::vector<double>& table, int n) {
  const Word all = full_word(n);
  const Word size = cube_size(n);
  for (Word w = 0; w < size; ++w) {
    const Word partner = w ^ all;
    if (w < partner) std::swap(table[w], table[partner]);
  }
}

template <class CoefficientFn>
std::vector<double> build_table(const DisorderVariant& v, int n, CoefficientFn&& coefficient) {
  const auto size = static_cast<std::int64_t>(cube_size(n));
  std::vector<double> table(static_cast<std::size_t>(size), 0.0);
  if (v.tag == VariantTag::REM) {
    const double scale = std::sqrt(static_cast<double>(n));
#pragma omp parallel for schedule(static) if (size >= (1 << 16))
    for (std::int64_t w = 0; w < size; ++w) {
      table[w] = scale * coefficient(static_cast<Word>(w), 1.0);
    }
    return table;
  }
  // Coefficient of the parity over subset J, or 0 if J carries no coupling.
  std::vector<double> weight(static_cast<std::size_t>(n) + 1, 0.0);
  if (v.tag == VariantTag::StrictPSpin) {
    weight[v.p] = 1.0;
  } else {
    weight = full_support_weights(n, v.p);
    for (int s = 0; s <= n; ++s) {
      if (s > v.p || (v.p - s) % 2 != 0) weight[s] = 0.0;
    }
  }
#pragma omp parallel for schedule(static) if (size >= (1 << 16))
  for (std::int64_t w = 0; w < size; ++w) {
    const int s = std::popcount(static_cast<Word>(w));
    if (weight[s] != 0.0) table[w] = coefficient(static_cast<Word>(w), weight[s]);
  }
  fast_walsh_hadamard(table);
  reflect_to_configurations(table, n);
  return table;
}

}  // namespace

double tuple_support_count(int n, int p, int s) {
  if (n < 1 || p < 0 || s < 0 || s > n) throw InvalidArgument("tuple_support_count: bad arguments");
  std::vector<double> count(static_cast<std::size_t>(n) + 1, 0.0);
  count[0] = 1.0;
  for (int step = 0; step < p; ++step) {
    std::vector<double> next(count.size(), 0.0);
    for (int k = 0; k <= n; ++k) {
      if (count[k] == 0.0) continue;
      if (k > 0) next[k - 1] += count[k] * k;
      if (k < n) next[k + 1] += count[k] * (n - k);
    }
    count = std::move(next);
  }
  return count[s] / binomial(n, s);
}

DisorderRealization sample(const DisorderVariant& variant, int n, std::uint64_t seed) {
  validate_variant(variant, n);
  const CounterRng rng(seed);
  double scale = 1.0;
  if (variant.tag == VariantTag::StrictPSpin) scale = strict_scale(n, variant.p);
  auto table = build_table(variant, n, [&](Word w, double weight) {
    const double g = rng.gaussian(Stream::Couplings, w);
    switch (variant.tag) {
      case VariantTag::StrictPSpin: return scale * g;
      case VariantTag::FullPSpin: return std::sqrt(weight) * g;
      case VariantTag::REM: return g;
    }
    return 0.0;
  });
  return {variant, n, seed, std::move(table)};
}

DisorderRealization sample_with_couplings(const DisorderVariant& variant, int n,
                                          const std::function<double(Word)>& coupling) {
  validate_variant(variant, n);
  double scale = 1.0;
  if (variant.tag == VariantTag::StrictPSpin) scale = strict_scale(n, variant.p);
  if (variant.tag == VariantTag::FullPSpin) scale = full_scale(n, variant.p);
  // The callback may not be thread-safe; evaluate it serially first.
  std::vector<double> raw(cube_size(n), 0.0);
  for (Word w = 0; w < cube_size(n); ++w) {
    const int s = std::popcount(w);
    const bool carries =
        variant.tag == VariantTag::REM ||
        (variant.tag == VariantTag::StrictPSpin && s == variant.p) ||
        (variant.tag == VariantTag::FullPSpin && s <= variant.p && (variant.p - s) % 2 == 0);
    if (carries) raw[w] = coupling(w);
  }
  auto table = build_table(variant, n, [&](Word w, double) { return scale * raw[w]; });
  return {variant, n, 0, std::move(table)};
}

double covariance_exact(const DisorderVariant& variant, int n, int d) {
  check_spin_count(n);
  if (d < 0 || d > n) throw InvalidArgument("distance out of range");
  switch (variant.tag) {
    case VariantTag::REM:
      return d == 0 ? n : 0.0;
    case VariantTag::FullPSpin: {
      if (variant.p < 2) throw InvalidArgument("interaction order p must be at least 2");
      const double r = static_cast<double>(n - 2 * d) / n;
      return n * std::pow(r, variant.p);
    }
    case VariantTag::StrictPSpin: {
      const int p = variant.p;
      if (p < 2 || p > n) throw InvalidArgument("strict p-spin needs 2 <= p <= N");
      const int m = n - d;
      long double sum = 0.0L;
      for (int k = 0; k <= p; ++k) {
        const long double term = static_cast<long double>(binomial(m, p - k)) * binomial(d, k);
        sum += (k % 2 == 0) ? term : -term;
      }
      const long double prefactor =
          std::exp(std::lgamma(p + 1.0L) - (p - 1) * std::log(static_cast<long double>(n)));
      return static_cast<double>(prefactor * sum);
    }
  }
  return 0.0;
}

double covariance_convergence_gap(const DisorderVariant& variant, int n) {
  if (variant.tag == VariantTag::REM) throw InvalidArgument("convergence gap needs a p-spin variant");
  double gap = 0.0;
  for (int d = 0; d <= n; ++d) {
    const double r = static_cast<double>(n - 2 * d) / n;
    const double c = covariance_exact(variant, n, d) / n;
    gap = std::max(gap, std::abs(c - std::pow(r, variant.p)));
  }
  return gap;
}

MeanEstimate empirical_covariance(const DisorderVariant& variant, int n, int d, int num_samples,
                                  std::uint64_t seed) {
  validate_variant(variant, n);
  if (d < 0 || d > n) throw InvalidArgument("distance out of range");
  if (num_samples < 100) throw InvalidArgument("empirical covariance needs at least 100 samples");
  const Word sigma = 0;
  const Word tau = full_word(d);
  std::vector<double> products(static_cast<std::size_t>(num_samples));
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < num_samples; ++k) {
    const auto real = sample(variant, n, seed + static_cast<std::uint64_t>(k));
    products[k] = real.energy(sigma) * real.energy(tau);
  }
  const double mean = std::accumulate(products.begin(), products.end(), 0.0) / num_samples;
  double ss = 0.0;
  for (double x : products) ss += (x - mean) * (x - mean);
  const double var = ss / (num_samples - 1);
  return {mean, std::sqrt(var / num_samples)};
}

double ground_state_density(const DisorderRealization& real) {
  const auto e = real.energies();
  return *std::min_element(e.begin(), e.end()) / real.n();
}

double mean_energy(const DisorderRealization& real) {
  const auto e = real.energies();
  return std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
}

}  // namespace qrem
