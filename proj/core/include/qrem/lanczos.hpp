#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qrem {

// y = A x for a real symmetric operator of fixed dimension.
using MatVec = std::function<void(std::span<const double> x, std::span<double> y)>;

struct Tridiagonal {
  std::vector<double> diag;     // alpha_1..alpha_m
  std::vector<double> offdiag;  // beta_1..beta_{m-1}
  bool invariant = false;       // Krylov space became invariant before m steps
};

struct LanczosOptions {
  std::size_t steps = 40;
  bool reorthogonalize = true;
  // Relative size of beta_j below which the Krylov space counts as invariant.
  double breakdown_tol = 1e-12;
};

// Lanczos recurrence from `start` (need not be normalised). With full
// reorthogonalisation every new vector is orthogonalised twice against the
// stored basis. Dot products run serially so results do not depend on the
// thread count.
Tridiagonal lanczos(const MatVec& op, std::span<const double> start, const LanczosOptions& opt);

// Nodes and weights of the Gauss quadrature rule encoded by a Jacobi matrix:
// eigenvalues theta_k and squared first eigenvector components tau_k^2.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_rule(const Tridiagonal& t);

struct ExtremalOptions {
  double tol = 1e-10;            // residual bound on the Ritz pair
  std::size_t max_matvecs = 0;   // 0: 10 * dimension
  std::size_t restart_dim = 120;
};

struct ExtremalResult {
  double value = 0.0;
  double residual = 0.0;
  std::size_t matvecs = 0;
};

// Largest eigenvalue of a symmetric operator by restarted Lanczos with full
// reorthogonalisation. Throws ConvergenceError when the residual does not
// reach `tol` within the matvec budget.
ExtremalResult largest_eigenvalue(const MatVec& op, std::span<const double> start,
                                  const ExtremalOptions& opt = {});

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace qrem
