#pragma once

// Pressures Phi = (1/N) ln 2^{-N} Tr exp(-beta H), per realization and
// averaged over disorder, plus per-realization checks of the variational
// lower bound and the direct-sum upper bound.
//
// All partition-function arithmetic stays in log space.

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrem/disorder.hpp"
#include "qrem/operators.hpp"

namespace qrem {

inline constexpr int kMaxDenseSpins = 14;
inline constexpr int kMaxStochasticSpins = 26;

enum class PressureMethod { ClassicalExact, DenseEig, StochasticLanczos, ClosedForm };
std::string to_string(PressureMethod m);

struct PressureEstimate {
  double value = 0.0;
  double stderr_ = 0.0;           // disorder and trace noise in quadrature
  double disorder_stderr = 0.0;
  double trace_stderr = 0.0;
  int num_samples = 1;
  PressureMethod method = PressureMethod::ClassicalExact;
  double beta = 0.0;
  double gamma = 0.0;
  std::uint64_t first_seed = 0;
  std::uint64_t last_seed = 0;
  std::vector<double> samples;    // per-realization pressures, seed order
};

double log_sum_exp(std::span<const double> x);
// ln(e^a + e^b) with -inf allowed.
double log_add_exp(double a, double b);

// Pairwise (cascade) summation in a fixed order.
double pairwise_sum(std::span<const double> x);

double classical_pressure(const DisorderRealization& real, double beta);

// ln Tr_domain exp(-beta H) from a spectrum.
double log_trace_exp(const Eigen::VectorXd& spectrum, double beta);

// ln Tr exp(-beta H) over the Hamiltonian's domain, by dense diagonalisation.
double log_partition_dense(const HamiltonianSpec& spec, double beta);

double quantum_pressure_dense(const HamiltonianSpec& spec, double beta);

// One diagonalisation shared by every beta.
std::vector<double> quantum_pressure_dense(const HamiltonianSpec& spec,
                                           std::span<const double> betas);

struct StochasticResult {
  double value = 0.0;
  double stderr_ = 0.0;
  int probes_used = 0;
  int probes_discarded = 0;
  bool reorthogonalized = true;
};

// Basis memory above which Lanczos runs without reorthogonalisation.
inline constexpr std::size_t kReorthMemoryBudget = std::size_t{1} << 30;

// Hutchinson estimate of 2^{-N} Tr exp(-beta H) with Rademacher probes, each
// evaluated by Lanczos (Gauss) quadrature, mapped to Phi. The error comes
// from the probe spread through the delta method on the logarithm.
StochasticResult quantum_pressure_stochastic(const HamiltonianSpec& spec, double beta, int probes,
                                             int krylov_dim, std::uint64_t seed);

enum class Engine { Auto, Classical, Dense, Stochastic };
std::string to_string(Engine e);
Engine parse_engine(const std::string& s);

struct QuenchedOptions {
  Engine engine = Engine::Auto;
  int probes = 16;
  int krylov_dim = 40;
  // Auto picks Classical at gamma = 0, Dense up to this N, else Stochastic.
  int auto_dense_max_n = 10;
};

PressureMethod resolve_method(const QuenchedOptions& opt, int n, double gamma);

// Mean pressure over seeds base_seed .. base_seed + num_disorder - 1.
PressureEstimate quenched_pressure(const DisorderVariant& variant, int n, double beta, double gamma,
                                   int num_disorder, std::uint64_t base_seed,
                                   const QuenchedOptions& opt = {});

// (1/N) ln E[2^{-N} Z] at gamma = 0: beta^2 c_{p,N}(1) / 2.
double annealed_pressure(const DisorderVariant& variant, int n, double beta);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

inline constexpr double kBoundTolerance = 1e-9;

// Phi(beta, gamma) >= max{ Phi(beta, 0), ln cosh(beta gamma) - beta mean(U)/N }.
BoundCheck gibbs_bound_check(const DisorderRealization& real, double beta, double gamma);

struct DecompositionCheck {
  double log_trace = 0.0;           // ln Tr e^{-beta H}
  double norm_T_plus = 0.0;         // ||T restricted to the augmented deep-hole set||
  double log_trace_deep = 0.0;      // ln Tr over L_eps of e^{-beta U}
  double log_trace_rest = 0.0;      // ln Tr over L_eps^c of e^{-beta H_{L^c}}
  double split_rhs = 0.0;           // beta gamma ||T_+|| + ln(deep + rest)
  double log_trace_rest_field = 0.0;  // beta eps N + ln Tr_{L^c} e^{beta gamma T_{L^c}}
  double paramagnet_bound = 0.0;    // beta eps N + N ln(2 cosh beta gamma)
  double chain_rhs = 0.0;           // beta gamma ||T_+|| + ln(Tr e^{-beta U} + e^{beta eps N}(2cosh)^N)
  bool split_holds = false;
  bool chain_holds = false;
  bool holds = false;
  bool degenerate_split = false;    // L_eps is the whole cube
  std::size_t deep_hole_count = 0;
  std::size_t augmented_count = 0;
};

DecompositionCheck decomposition_bound_check(const DisorderRealization& real, double beta,
                                             double gamma, double epsilon);

}  // namespace qrem
