#include "qrem/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <unordered_map>

#include "qrem/error.hpp"

namespace qrem {

HamiltonianSpec::HamiltonianSpec(const DisorderRealization& disorder, double gamma,
                                 std::optional<SubsetMask> restriction)
    : disorder_(&disorder), gamma_(gamma), restriction_(std::move(restriction)) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("transverse field must be finite and non-negative");
  }
  if (restriction_ && restriction_->n() != disorder.n()) {
    throw DimensionError("restriction and disorder have different spin counts");
  }
}

std::size_t HamiltonianSpec::domain_size() const {
  return restriction_ ? restriction_->count() : cube_size(n());
}

std::vector<Word> HamiltonianSpec::domain() const {
  if (restriction_) return restriction_->members();
  std::vector<Word> all(cube_size(n()));
  for (Word w = 0; w < all.size(); ++w) all[w] = w;
  return all;
}

void apply_into(const HamiltonianSpec& spec, std::span<const double> v, std::span<double> out) {
  const int n = spec.n();
  const auto size = static_cast<std::int64_t>(cube_size(n));
  if (v.size() != cube_size(n) || out.size() != cube_size(n)) {
    throw DimensionError("state vector length must be 2^N");
  }
  const auto energies = spec.disorder().energies();
  const double gamma = spec.gamma();
  const SubsetMask* mask = spec.restriction() ? &*spec.restriction() : nullptr;

#pragma omp parallel for schedule(static) if (size >= (1 << 14))
  for (std::int64_t i = 0; i < size; ++i) {
    const Word w = static_cast<Word>(i);
    if (mask && !mask->contains(w)) {
      out[w] = 0.0;
      continue;
    }
    double hop = 0.0;
    if (gamma != 0.0) {
      for (int j = 0; j < n; ++j) {
        const Word nb = w ^ (Word{1} << j);
        if (!mask || mask->contains(nb)) hop += v[nb];
      }
    }
    out[w] = energies[w] * v[w] - gamma * hop;
  }
}

StateVector apply(const HamiltonianSpec& spec, std::span<const double> v) {
  StateVector out(cube_size(spec.n()));
  apply_into(spec, v, out);
  return out;
}

MatVec make_matvec(const HamiltonianSpec& spec) {
  return [&spec](std::span<const double> x, std::span<double> y) { apply_into(spec, x, y); };
}

int restricted_T_matrix_element(const SubsetMask& A, const SpinConfiguration& a,
                                const SpinConfiguration& b) {
  if (A.n() != a.n() || a.n() != b.n()) throw DimensionError("spin counts differ");
  return (A.contains(a.bits()) && A.contains(b.bits()) && hamming_distance(a, b) == 1) ? 1 : 0;
}

Eigen::MatrixXd dense_matrix(const HamiltonianSpec& spec) {
  const auto members = spec.domain();
  const std::size_t m = members.size();
  if (m > kMaxDenseDomain) {
    throw InvalidArgument("dense matrix domain has " + std::to_string(m) +
                          " states; the cap is 2^14");
  }
  const int n = spec.n();
  std::unordered_map<Word, Eigen::Index> position;
  position.reserve(m);
  for (std::size_t i = 0; i < m; ++i) position.emplace(members[i], static_cast<Eigen::Index>(i));

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    H(row, row) = spec.disorder().energy(members[i]);
    if (spec.gamma() == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const auto it = position.find(members[i] ^ (Word{1} << j));
      if (it != position.end()) H(row, it->second) = -spec.gamma();
    }
  }
  return H;
}

Eigen::VectorXd dense_spectrum(const HamiltonianSpec& spec) {
  const Eigen::MatrixXd H = dense_matrix(spec);
  if (H.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EngineError("dense eigensolver failed");
  return es.eigenvalues();
}

CompressedAdjacency compressed_adjacency(const SubsetMask& A) {
  CompressedAdjacency adj;
  adj.members = A.members();
  const int n = A.n();
  const std::size_t m = adj.members.size();
  std::unordered_map<Word, std::uint32_t> position;
  position.reserve(m);
  for (std::size_t i = 0; i < m; ++i) position.emplace(adj.members[i], static_cast<std::uint32_t>(i));
  adj.offsets.reserve(m + 1);
  adj.offsets.push_back(0);
  for (std::size_t i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const Word nb = adj.members[i] ^ (Word{1} << j);
      if (A.contains(nb)) adj.neighbors.push_back(position.at(nb));
    }
    adj.offsets.push_back(static_cast<std::uint32_t>(adj.neighbors.size()));
  }
  return adj;
}

double operator_norm(const SubsetMask& A, const ExtremalOptions& opt) {
  const CompressedAdjacency adj = compressed_adjacency(A);
  const std::size_t m = adj.members.size();
  if (m == 0) throw InvalidArgument("operator norm of T on an empty set");
  if (adj.neighbors.empty()) return 0.0;

  MatVec op = [&adj, m](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (auto k = adj.offsets[i]; k < adj.offsets[i + 1]; ++k) s += x[adj.neighbors[k]];
      y[i] = s;
    }
  };
  // T_A is entrywise non-negative, so its norm is the Perron eigenvalue and a
  // positive start vector overlaps the Perron vector.
  const std::vector<double> start(m, 1.0);
  return largest_eigenvalue(op, start, opt).value;
}

}  // namespace qrem
