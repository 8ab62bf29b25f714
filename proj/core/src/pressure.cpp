#include "qrem/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "qrem/closed_form.hpp"
#include "qrem/error.hpp"
#include "qrem/geometry.hpp"
#include "qrem/lanczos.hpp"
#include "qrem/rng.hpp"

namespace qrem {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be finite and > 0");
}

double sample_stddev(std::span<const double> x, double mean) {
  if (x.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace

std::string to_string(PressureMethod m) {
  switch (m) {
    case PressureMethod::ClassicalExact: return "classical_exact";
    case PressureMethod::DenseEig: return "dense_eig";
    case PressureMethod::StochasticLanczos: return "stochastic_lanczos";
    case PressureMethod::ClosedForm: return "closed_form";
  }
  return "unknown";
}

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::Classical: return "classical";
    case Engine::Dense: return "dense";
    case Engine::Stochastic: return "stochastic";
  }
  return "unknown";
}

Engine parse_engine(const std::string& s) {
  if (s == "auto") return Engine::Auto;
  if (s == "classical") return Engine::Classical;
  if (s == "dense") return Engine::Dense;
  if (s == "stochastic") return Engine::Stochastic;
  throw InvalidArgument("unknown engine '" + s + "' (auto, classical, dense, stochastic)");
}

double log_sum_exp(std::span<const double> x) {
  double m = kNegInf;
  for (double v : x) {
    if (std::isnan(v)) throw EngineError("log_sum_exp: NaN input");
    m = std::max(m, v);
  }
  if (m == kNegInf) return kNegInf;
  if (!std::isfinite(m)) throw EngineError("log_sum_exp: non-finite input");
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

double classical_pressure(const DisorderRealization& real, double beta) {
  check_beta(beta);
  const auto e = real.energies();
  std::vector<double> exponents(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!std::isfinite(e[i])) throw InvalidArgument("classical_pressure: non-finite energy");
    exponents[i] = -beta * e[i];
  }
  // m + ln(2^{-N} sum e^{x - m}); scaling by a power of two is exact.
  const int n = real.n();
  const double m = *std::max_element(exponents.begin(), exponents.end());
  double s = 0.0;
  for (double x : exponents) s += std::exp(x - m);
  return (m + std::log(std::ldexp(s, -n))) / n;
}

double log_trace_exp(const Eigen::VectorXd& spectrum, double beta) {
  std::vector<double> exponents(static_cast<std::size_t>(spectrum.size()));
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) exponents[i] = -beta * spectrum[i];
  return log_sum_exp(exponents);
}

double log_partition_dense(const HamiltonianSpec& spec, double beta) {
  check_beta(beta);
  if (spec.domain_size() == 0) return kNegInf;
  return log_trace_exp(dense_spectrum(spec), beta);
}

double quantum_pressure_dense(const HamiltonianSpec& spec, double beta) {
  check_beta(beta);
  const int n = spec.n();
  if (n > kMaxDenseSpins) {
    throw InvalidArgument("dense pressure is capped at N = " + std::to_string(kMaxDenseSpins));
  }
  if (spec.restriction()) throw InvalidArgument("dense pressure is defined on the full cube");
  return (log_partition_dense(spec, beta) - n * std::numbers::ln2) / n;
}

std::vector<double> quantum_pressure_dense(const HamiltonianSpec& spec,
                                           std::span<const double> betas) {
  for (double b : betas) check_beta(b);
  const int n = spec.n();
  if (n > kMaxDenseSpins) {
    throw InvalidArgument("dense pressure is capped at N = " + std::to_string(kMaxDenseSpins));
  }
  if (spec.restriction()) throw InvalidArgument("dense pressure is defined on the full cube");
  std::vector<double> out;
  out.reserve(betas.size());
  if (betas.empty()) return out;
  const Eigen::VectorXd spectrum = dense_spectrum(spec);
  for (double b : betas) out.push_back((log_trace_exp(spectrum, b) - n * std::numbers::ln2) / n);
  return out;
}

StochasticResult quantum_pressure_stochastic(const HamiltonianSpec& spec, double beta, int probes,
                                             int krylov_dim, std::uint64_t seed) {
  check_beta(beta);
  if (probes < 8) throw InvalidArgument("stochastic pressure needs at least 8 probes");
  if (krylov_dim < 30) throw InvalidArgument("stochastic pressure needs krylov_dim >= 30");
  const int n = spec.n();
  if (n > kMaxStochasticSpins) {
    throw InvalidArgument("stochastic pressure is capped at N = " +
                          std::to_string(kMaxStochasticSpins));
  }
  if (spec.restriction()) throw InvalidArgument("stochastic pressure is defined on the full cube");

  const std::size_t dim = cube_size(n);
  StochasticResult result;
  LanczosOptions lopt;
  lopt.steps = static_cast<std::size_t>(krylov_dim);
  lopt.reorthogonalize =
      static_cast<double>(krylov_dim) * static_cast<double>(dim) * sizeof(double) <=
      static_cast<double>(kReorthMemoryBudget);
  result.reorthogonalized = lopt.reorthogonalize;

  const CounterRng rng(seed);
  const MatVec op = make_matvec(spec);
  std::vector<double> log_estimates;
  std::vector<double> z(dim);
  for (int k = 0; k < probes; ++k) {
    for (std::size_t i = 0; i < dim; ++i) z[i] = rng.rademacher(static_cast<std::uint32_t>(k), i);
    // z^T f(H) z = ||z||^2 sum_k tau_k^2 f(theta_k) and ||z||^2 = 2^N, so the
    // quadrature sum is directly an estimate of 2^{-N} Tr e^{-beta H}.
    const Tridiagonal t = lanczos(op, z, lopt);
    const GaussRule rule = gauss_rule(t);
    std::vector<double> terms;
    terms.reserve(rule.nodes.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      if (rule.weights[j] > 0.0) terms.push_back(std::log(rule.weights[j]) - beta * rule.nodes[j]);
    }
    double log_x = kNegInf;
    try {
      log_x = log_sum_exp(terms);
    } catch (const EngineError&) {
      log_x = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(log_x)) {
      ++result.probes_discarded;
      continue;
    }
    log_estimates.push_back(log_x);
  }
  result.probes_used = static_cast<int>(log_estimates.size());
  if (log_estimates.empty()) throw EngineError("stochastic pressure: every probe failed");

  const double shift = *std::max_element(log_estimates.begin(), log_estimates.end());
  std::vector<double> ratios(log_estimates.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) ratios[i] = std::exp(log_estimates[i] - shift);
  const double mean = pairwise_sum(ratios) / static_cast<double>(ratios.size());
  const double sd = sample_stddev(ratios, mean);
  result.value = (shift + std::log(mean)) / n;
  result.stderr_ = sd / std::sqrt(static_cast<double>(ratios.size())) / mean / n;
  return result;
}

PressureMethod resolve_method(const QuenchedOptions& opt, int n, double gamma) {
  switch (opt.engine) {
    case Engine::Classical:
      if (gamma != 0.0) throw InvalidArgument("classical engine needs gamma = 0");
      return PressureMethod::ClassicalExact;
    case Engine::Dense: return PressureMethod::DenseEig;
    case Engine::Stochastic: return PressureMethod::StochasticLanczos;
    case Engine::Auto: break;
  }
  if (gamma == 0.0) return PressureMethod::ClassicalExact;
  if (n <= opt.auto_dense_max_n) return PressureMethod::DenseEig;
  return PressureMethod::StochasticLanczos;
}

PressureEstimate quenched_pressure(const DisorderVariant& variant, int n, double beta, double gamma,
                                   int num_disorder, std::uint64_t base_seed,
                                   const QuenchedOptions& opt) {
  check_beta(beta);
  validate_variant(variant, n);
  if (num_disorder < 2) throw InvalidArgument("quenched pressure needs at least 2 realizations");
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be >= 0");
  const PressureMethod method = resolve_method(opt, n, gamma);
  if (method == PressureMethod::DenseEig && n > kMaxDenseSpins) {
    throw InvalidArgument("dense pressure is capped at N = " + std::to_string(kMaxDenseSpins));
  }

  PressureEstimate est;
  est.method = method;
  est.beta = beta;
  est.gamma = gamma;
  est.num_samples = num_disorder;
  est.first_seed = base_seed;
  est.last_seed = base_seed + static_cast<std::uint64_t>(num_disorder - 1);
  est.samples.assign(static_cast<std::size_t>(num_disorder), 0.0);
  std::vector<double> trace_var(static_cast<std::size_t>(num_disorder), 0.0);

  // Exceptions cannot leave an OpenMP region; collect the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < num_disorder; ++k) {
    try {
      const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(k);
      const auto real = sample(variant, n, seed);
      double value = 0.0;
      switch (method) {
        case PressureMethod::ClassicalExact: value = classical_pressure(real, beta); break;
        case PressureMethod::DenseEig:
          value = quantum_pressure_dense(HamiltonianSpec(real, gamma), beta);
          break;
        case PressureMethod::StochasticLanczos: {
          const auto r = quantum_pressure_stochastic(HamiltonianSpec(real, gamma), beta, opt.probes,
                                                     opt.krylov_dim, seed);
          value = r.value;
          trace_var[static_cast<std::size_t>(k)] = r.stderr_ * r.stderr_;
          break;
        }
        case PressureMethod::ClosedForm: break;
      }
      est.samples[static_cast<std::size_t>(k)] = value;
    } catch (...) {
#pragma omp critical(qrem_quenched_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  est.value = pairwise_sum(est.samples) / num_disorder;
  est.disorder_stderr = sample_stddev(est.samples, est.value) / std::sqrt(num_disorder);
  est.trace_stderr = std::sqrt(pairwise_sum(trace_var)) / num_disorder;
  est.stderr_ = std::hypot(est.disorder_stderr, est.trace_stderr);
  return est;
}

double annealed_pressure(const DisorderVariant& variant, int n, double beta) {
  return 0.5 * beta * beta * covariance_exact(variant, n, 0) / n;
}

BoundCheck gibbs_bound_check(const DisorderRealization& real, double beta, double gamma) {
  const int n = real.n();
  if (n > kMaxDenseSpins) throw InvalidArgument("gibbs_bound_check is capped at the dense limit");
  BoundCheck out;
  out.lhs = quantum_pressure_dense(HamiltonianSpec(real, gamma), beta);
  const double classical = classical_pressure(real, beta);
  const double paramagnet = log_cosh(beta * gamma) - beta * mean_energy(real) / n;
  out.rhs = std::max(classical, paramagnet);
  out.holds = out.lhs >= out.rhs - kBoundTolerance;
  return out;
}

DecompositionCheck decomposition_bound_check(const DisorderRealization& real, double beta,
                                             double gamma, double epsilon) {
  check_beta(beta);
  const int n = real.n();
  if (n > kMaxDenseSpins) {
    throw InvalidArgument("decomposition_bound_check is capped at the dense limit");
  }
  DecompositionCheck out;
  const auto holes = deep_holes(real, epsilon);
  const SubsetMask& deep = holes.mask;
  const SubsetMask plus = augment(deep);
  const SubsetMask rest = deep.complement();
  out.deep_hole_count = deep.count();
  out.augmented_count = plus.count();
  out.degenerate_split = rest.empty();

  out.log_trace = log_partition_dense(HamiltonianSpec(real, gamma), beta);
  out.norm_T_plus = plus.empty() ? 0.0 : operator_norm(plus);

  std::vector<double> deep_exponents;
  std::vector<double> all_exponents;
  const auto e = real.energies();
  for (Word w = 0; w < e.size(); ++w) {
    all_exponents.push_back(-beta * e[w]);
    if (deep.contains(w)) deep_exponents.push_back(-beta * e[w]);
  }
  out.log_trace_deep = log_sum_exp(deep_exponents);
  out.log_trace_rest =
      rest.empty() ? kNegInf : log_partition_dense(HamiltonianSpec(real, gamma, rest), beta);
  const double field = beta * gamma * out.norm_T_plus;
  out.split_rhs = field + log_add_exp(out.log_trace_deep, out.log_trace_rest);

  // H on L^c is bounded below by -eps N - gamma T_{L^c}.
  const auto zero = DisorderRealization::from_table(n, std::vector<double>(cube_size(n), 0.0));
  const double free_rest =
      rest.empty() ? kNegInf : log_partition_dense(HamiltonianSpec(zero, gamma, rest), beta);
  out.log_trace_rest_field = beta * epsilon * n + free_rest;
  out.paramagnet_bound = beta * epsilon * n + n * (log_cosh(beta * gamma) + std::numbers::ln2);
  out.chain_rhs = field + log_add_exp(log_sum_exp(all_exponents), out.paramagnet_bound);

  const double tol = std::log1p(kBoundTolerance);
  out.split_holds = out.log_trace <= out.split_rhs + tol;
  out.chain_holds = out.log_trace_rest <= out.log_trace_rest_field + tol &&
                    out.log_trace_rest_field <= out.paramagnet_bound + tol &&
                    out.split_rhs <= out.chain_rhs + tol;
  out.holds = out.split_holds && out.chain_holds;
  return out;
}

}  // namespace qrem
