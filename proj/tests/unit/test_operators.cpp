#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oracles.hpp"
#include "qrem/error.hpp"
#include "qrem/lanczos.hpp"
#include "qrem/operators.hpp"
#include "qrem/rng.hpp"

using namespace qrem;

namespace {

StateVector random_vector(std::size_t dim, std::uint64_t seed) {
  const CounterRng rng(seed);
  StateVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = rng.gaussian(Stream::Auxiliary, i);
  return v;
}

DisorderRealization zero_table(int n) {
  return DisorderRealization::from_table(n, std::vector<double>(cube_size(n), 0.0));
}

}  // namespace

TEST(Apply, GammaZeroIsDiagonal) {
  const auto real = sample(DisorderVariant::full(3), 7, 1);
  const auto v = random_vector(128, 2);
  const auto out = qrem::apply(HamiltonianSpec(real, 0.0), v);
  for (Word w = 0; w < 128; ++w) EXPECT_DOUBLE_EQ(out[w], real.energy(w) * v[w]);
}

TEST(Apply, UniformVectorIsTopEigenvectorOfT) {
  const auto zero = zero_table(6);
  const StateVector v(64, 1.0);
  const auto out = qrem::apply(HamiltonianSpec(zero, 0.7), v);
  for (double x : out) EXPECT_NEAR(x, -0.7 * 6, 1e-14);
}

TEST(Apply, HandMatvecN2) {
  const auto zero = zero_table(2);
  StateVector v(4, 0.0);
  v[3] = 1.0;  // (+,+)
  const auto out = qrem::apply(HamiltonianSpec(zero, 1.0), v);
  EXPECT_EQ(out, (StateVector{0.0, -1.0, -1.0, 0.0}));
}

TEST(Apply, RestrictionMasksBothEnds) {
  const auto real = sample(DisorderVariant::rem(), 5, 4);
  const auto mask = SubsetMask::from_members(5, {0, 1, 3, 7, 20});
  const HamiltonianSpec spec(real, 1.3, mask);
  const auto v = random_vector(32, 5);
  const auto out = qrem::apply(spec, v);
  for (Word a = 0; a < 32; ++a) {
    double expect = 0.0;
    if (mask.contains(a)) {
      expect = real.energy(a) * v[a];
      for (int j = 0; j < 5; ++j) {
        const Word b = a ^ (Word{1} << j);
        if (mask.contains(b)) expect -= 1.3 * v[b];
      }
    }
    EXPECT_NEAR(out[a], expect, 1e-13);
  }
}

TEST(Apply, DimensionMismatchThrows) {
  const auto zero = zero_table(3);
  StateVector v(7), out(8);
  EXPECT_THROW(apply_into(HamiltonianSpec(zero, 1.0), v, out), DimensionError);
  EXPECT_THROW(HamiltonianSpec(zero, 1.0, SubsetMask(4)), DimensionError);
  EXPECT_THROW(HamiltonianSpec(zero, -1.0), InvalidArgument);
}

TEST(Apply, Symmetric) {
  const auto real = sample(DisorderVariant::strict(3), 9, 8);
  const HamiltonianSpec spec(real, 0.9);
  for (int k = 0; k < 5; ++k) {
    const auto u = random_vector(512, 100 + k);
    const auto v = random_vector(512, 200 + k);
    const double a = dot(u, qrem::apply(spec, v));
    const double b = dot(qrem::apply(spec, u), v);
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST(RestrictedTMatrixElement, Examples) {
  const auto mask = SubsetMask::from_members(4, {0, 1, 3});
  const SpinConfiguration a(0, 4), b(1, 4), c(2, 4), d(3, 4);
  EXPECT_EQ(restricted_T_matrix_element(mask, a, a), 0);
  EXPECT_EQ(restricted_T_matrix_element(mask, a, b), 1);
  EXPECT_EQ(restricted_T_matrix_element(mask, a, c), 0);
  EXPECT_EQ(restricted_T_matrix_element(mask, b, d), 1);
  EXPECT_EQ(restricted_T_matrix_element(mask, a, d), 0);
}

TEST(DenseMatrix, TwoSiteParamagnet) {
  const auto zero = zero_table(2);
  const auto mask = SubsetMask::from_members(2, {0, 1});
  const auto h = dense_matrix(HamiltonianSpec(zero, 0.6, mask));
  ASSERT_EQ(h.rows(), 2);
  EXPECT_EQ(h(0, 0), 0.0);
  EXPECT_EQ(h(0, 1), -0.6);
  EXPECT_EQ(h(1, 0), -0.6);
  const auto ev = dense_spectrum(HamiltonianSpec(zero, 0.6, mask));
  EXPECT_NEAR(ev[0], -0.6, 1e-15);
  EXPECT_NEAR(ev[1], 0.6, 1e-15);
}

TEST(DenseMatrix, AgreesWithApplyAndOracle) {
  const auto real = sample(DisorderVariant::full(2), 3, 11);
  const HamiltonianSpec spec(real, 0.8);
  const auto h = dense_matrix(spec);
  const std::vector<double> e(real.energies().begin(), real.energies().end());
  std::vector<Word> all(8);
  for (Word w = 0; w < 8; ++w) all[w] = w;
  EXPECT_LT((h - oracle::dense_hamiltonian(e, 3, 0.8, all)).cwiseAbs().maxCoeff(), 1e-15);
  for (int k = 0; k < 20; ++k) {
    const auto v = random_vector(8, 300 + k);
    const auto hv = qrem::apply(spec, v);
    const Eigen::VectorXd dv = h * Eigen::Map<const Eigen::VectorXd>(v.data(), 8);
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(dv[i], hv[i], 1e-12 * std::max(1.0, std::abs(hv[i])));
  }
}

TEST(DenseMatrix, SingletonRestriction) {
  const auto real = sample(DisorderVariant::rem(), 4, 2);
  const auto h = dense_matrix(HamiltonianSpec(real, 3.0, SubsetMask::from_members(4, {9})));
  ASSERT_EQ(h.rows(), 1);
  EXPECT_EQ(h(0, 0), real.energy(9));
}

TEST(DenseMatrix, DomainCap) {
  const auto zero = zero_table(15);
  EXPECT_THROW(dense_matrix(HamiltonianSpec(zero, 1.0)), InvalidArgument);
}

TEST(Lanczos, TridiagonalReproducesExtremes) {
  const auto real = sample(DisorderVariant::full(3), 8, 21);
  const HamiltonianSpec spec(real, 0.5);
  const auto ev = dense_spectrum(spec);
  const StateVector start(256, 1.0);
  const auto t = lanczos(make_matvec(spec), random_vector(256, 1), {.steps = 80});
  const auto rule = gauss_rule(t);
  EXPECT_NEAR(rule.nodes.front(), ev[0], 1e-8);
  EXPECT_NEAR(rule.nodes.back(), ev[255], 1e-8);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  EXPECT_NEAR(wsum, 1.0, 1e-12);
}

TEST(Lanczos, BreakdownFlagsInvariantSubspace) {
  const auto zero = zero_table(5);
  // Uniform vector spans an invariant subspace of T.
  const auto t = lanczos(make_matvec(HamiltonianSpec(zero, 1.0)), StateVector(32, 1.0), {.steps = 10});
  EXPECT_TRUE(t.invariant);
  EXPECT_EQ(t.diag.size(), 1u);
  EXPECT_NEAR(t.diag[0], -5.0, 1e-14);
}

TEST(Lanczos, RejectsZeroStart) {
  const auto zero = zero_table(3);
  EXPECT_THROW(lanczos(make_matvec(HamiltonianSpec(zero, 1.0)), StateVector(8, 0.0), {}),
               InvalidArgument);
}

TEST(LargestEigenvalue, MatchesDense) {
  const auto real = sample(DisorderVariant::rem(), 9, 31);
  const HamiltonianSpec spec(real, 1.1);
  const auto ev = dense_spectrum(spec);
  const auto res = largest_eigenvalue(make_matvec(spec), random_vector(512, 9));
  EXPECT_NEAR(res.value, ev[511], 1e-9);
  EXPECT_LE(res.residual, 1e-10);
}

TEST(LargestEigenvalue, BudgetExhaustionThrows) {
  const auto real = sample(DisorderVariant::rem(), 10, 31);
  ExtremalOptions opt;
  opt.max_matvecs = 3;
  opt.restart_dim = 2;
  EXPECT_THROW(largest_eigenvalue(make_matvec(HamiltonianSpec(real, 1.0)), random_vector(1024, 1), opt),
               ConvergenceError);
}

TEST(OperatorNorm, Examples) {
  for (int n = 2; n <= 14; ++n) EXPECT_NEAR(operator_norm(SubsetMask::full(n)), n, 1e-9) << n;
  EXPECT_EQ(operator_norm(SubsetMask::from_members(6, {13})), 0.0);
  EXPECT_THROW(operator_norm(SubsetMask(6)), InvalidArgument);
}

TEST(OperatorNorm, MatchesDenseOracle) {
  const CounterRng rng(17);
  for (int k = 0; k < 30; ++k) {
    const int n = 4 + k % 7;
    SubsetMask a(n);
    for (Word w = 0; w < cube_size(n); ++w) {
      if (rng.uniform(Stream::Auxiliary, w, static_cast<std::uint32_t>(k)) < 0.4) a.insert(w);
    }
    if (a.empty()) a.insert(0);
    EXPECT_NEAR(operator_norm(a), oracle::dense_adjacency_norm(a.members(), n), 1e-9) << k;
  }
}

TEST(OperatorNorm, BallBound16) {
  const int n = 16, radius = 4;
  const double rl = 0.25;
  const double norm = operator_norm(ball(SpinConfiguration::all_down(n), radius));
  EXPECT_LE(norm, 2.0 * n * std::sqrt(rl));
  EXPECT_LE(norm, 2.0 * n * std::sqrt(rl * (1 - rl + 1.0 / n)));
}

TEST(CompressedAdjacency, DegreesMatchMembership) {
  const auto a = SubsetMask::from_members(4, {0, 1, 2, 3, 15});
  const auto csr = compressed_adjacency(a);
  ASSERT_EQ(csr.members.size(), 5u);
  EXPECT_EQ(csr.offsets.back(), 8u);  // square 0-1-3-2 has four edges, vertex 15 none
  EXPECT_EQ(csr.offsets[4], csr.offsets[5]);
}
