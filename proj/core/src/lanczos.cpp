#include "qrem/lanczos.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qrem/error.hpp"

namespace qrem {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

// Runs up to `steps` Lanczos steps, keeping the basis when requested.
// Returns the recurrence; `basis` holds m vectors of length dim.
Tridiagonal run(const MatVec& op, std::span<const double> start, std::size_t steps,
                bool reorth, double breakdown_tol, std::vector<std::vector<double>>* basis,
                std::vector<double>* last_residual) {
  const std::size_t dim = start.size();
  if (dim == 0) throw InvalidArgument("Lanczos on an empty space");
  const double start_norm = norm2(start);
  if (!(start_norm > 0.0) || !std::isfinite(start_norm)) {
    throw InvalidArgument("Lanczos start vector must be nonzero and finite");
  }
  steps = std::min(steps, dim);

  Tridiagonal t;
  std::vector<std::vector<double>> local;
  auto& Q = basis ? *basis : local;
  Q.clear();

  std::vector<double> q(start.begin(), start.end());
  scale(1.0 / start_norm, q);
  std::vector<double> q_prev(dim, 0.0);
  std::vector<double> w(dim);
  double beta_prev = 0.0;
  double scale_est = 0.0;

  for (std::size_t j = 0; j < steps; ++j) {
    if (reorth) Q.push_back(q);
    op(q, w);
    const double alpha = dot(q, w);
    axpy(-alpha, q, w);
    if (j > 0) axpy(-beta_prev, q_prev, w);
    if (reorth) {
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : Q) axpy(-dot(v, w), v, w);
      }
    }
    t.diag.push_back(alpha);
    const double beta = norm2(w);
    scale_est = std::max({scale_est, std::abs(alpha), beta});
    if (j + 1 == steps) {
      if (last_residual) {
        *last_residual = w;
      }
      break;
    }
    if (beta <= breakdown_tol * std::max(scale_est, 1.0)) {
      t.invariant = true;
      if (last_residual) last_residual->assign(dim, 0.0);
      break;
    }
    t.offdiag.push_back(beta);
    q_prev.swap(q);
    q = w;
    scale(1.0 / beta, q);
    beta_prev = beta;
  }
  if (t.diag.size() == dim) t.invariant = true;
  return t;
}

}  // namespace

Tridiagonal lanczos(const MatVec& op, std::span<const double> start, const LanczosOptions& opt) {
  if (opt.steps == 0) throw InvalidArgument("Lanczos needs at least one step");
  return run(op, start, opt.steps, opt.reorthogonalize, opt.breakdown_tol, nullptr, nullptr);
}

GaussRule gauss_rule(const Tridiagonal& t) {
  const auto m = static_cast<Eigen::Index>(t.diag.size());
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(t.diag.data(), m);
  Eigen::VectorXd e(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index i = 0; i + 1 < m; ++i) e[i] = t.offdiag[static_cast<std::size_t>(i)];
  GaussRule rule;
  if (m == 1) {
    rule.nodes = {d[0]};
    rule.weights = {1.0};
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw EngineError("tridiagonal eigensolver failed");
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) {
    rule.nodes[k] = es.eigenvalues()[k];
    const double u = es.eigenvectors()(0, k);
    rule.weights[k] = u * u;
  }
  return rule;
}

ExtremalResult largest_eigenvalue(const MatVec& op, std::span<const double> start,
                                  const ExtremalOptions& opt) {
  const std::size_t dim = start.size();
  const std::size_t budget = opt.max_matvecs ? opt.max_matvecs : 10 * dim;
  std::vector<double> v(start.begin(), start.end());
  ExtremalResult result;
  std::vector<std::vector<double>> basis;
  std::vector<double> resid;

  while (result.matvecs < budget) {
    const std::size_t block = std::min({opt.restart_dim, dim, budget - result.matvecs});
    const Tridiagonal t = run(op, v, block, true, 1e-14, &basis, &resid);
    result.matvecs += t.diag.size();

    const auto m = static_cast<Eigen::Index>(t.diag.size());
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(t.diag.data(), m);
    Eigen::VectorXd y;
    double theta = 0.0;
    if (m == 1) {
      theta = d[0];
      y = Eigen::VectorXd::Ones(1);
    } else {
      Eigen::VectorXd e(m - 1);
      for (Eigen::Index i = 0; i + 1 < m; ++i) e[i] = t.offdiag[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
      theta = es.eigenvalues()[m - 1];
      y = es.eigenvectors().col(m - 1);
    }
    // Residual of the Ritz pair: ||A x - theta x|| = ||r|| * |y_m|.
    const double res = t.invariant ? 0.0 : norm2(resid) * std::abs(y[m - 1]);
    result.value = theta;
    result.residual = res;
    if (res <= opt.tol) return result;

    // Restart from the current Ritz vector.
    std::fill(v.begin(), v.end(), 0.0);
    for (Eigen::Index k = 0; k < m; ++k) axpy(y[k], basis[static_cast<std::size_t>(k)], v);
  }
  throw ConvergenceError("largest eigenvalue did not converge: residual " +
                         std::to_string(result.residual) + " after " +
                         std::to_string(result.matvecs) + " matvecs");
}

}  // namespace qrem
