#pragma once

// H = U - Gamma T on l^2 of the Hamming cube, applied matrix-free.
//
// T is the hypercube adjacency: (T v)(sigma) = sum_j v(F_j sigma). A
// restriction to A keeps only matrix elements with both endpoints in A;
// vectors stay full-length and entries outside A are read and written as 0.

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "qrem/disorder.hpp"
#include "qrem/hypercube.hpp"
#include "qrem/lanczos.hpp"

namespace qrem {

inline constexpr std::size_t kMaxDenseDomain = std::size_t{1} << 14;

using StateVector = std::vector<double>;

class HamiltonianSpec {
 public:
  HamiltonianSpec(const DisorderRealization& disorder, double gamma,
                  std::optional<SubsetMask> restriction = std::nullopt);

  const DisorderRealization& disorder() const { return *disorder_; }
  double gamma() const { return gamma_; }
  int n() const { return disorder_->n(); }
  const std::optional<SubsetMask>& restriction() const { return restriction_; }

  bool in_domain(Word w) const { return !restriction_ || restriction_->contains(w); }
  std::size_t domain_size() const;
  // Domain members in increasing word order.
  std::vector<Word> domain() const;

 private:
  const DisorderRealization* disorder_;
  double gamma_;
  std::optional<SubsetMask> restriction_;
};

void apply_into(const HamiltonianSpec& spec, std::span<const double> v, std::span<double> out);
StateVector apply(const HamiltonianSpec& spec, std::span<const double> v);

MatVec make_matvec(const HamiltonianSpec& spec);

int restricted_T_matrix_element(const SubsetMask& A, const SpinConfiguration& a,
                                const SpinConfiguration& b);

// Dense H on the domain, rows and columns in increasing word order.
Eigen::MatrixXd dense_matrix(const HamiltonianSpec& spec);

// All eigenvalues of the dense matrix, ascending.
Eigen::VectorXd dense_spectrum(const HamiltonianSpec& spec);

// ||T_A|| via restarted Lanczos on the compressed adjacency of A.
double operator_norm(const SubsetMask& A, const ExtremalOptions& opt = {});

// Adjacency of T restricted to A in compressed (CSR) form.
struct CompressedAdjacency {
  std::vector<Word> members;
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> neighbors;
};
CompressedAdjacency compressed_adjacency(const SubsetMask& A);

}  // namespace qrem
