#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "grid.hpp"
#include "qrem/closed_form.hpp"
#include "qrem/error.hpp"
#include "qrem/geometry.hpp"
#include "qrem/pressure.hpp"

namespace qrem::cli {

namespace {

using Clock = std::chrono::steady_clock;

struct VariantChoice {
  DisorderVariant variant;
  Cell p_cell;
};

// Expands the variant and p lists; the REM ignores p and appears once.
std::vector<VariantChoice> variant_grid(const RunConfig& cfg) {
  std::vector<VariantChoice> out;
  std::vector<std::string> names;
  std::string item;
  for (char c : cfg.variant + ",") {
    if (c == ',') {
      if (!item.empty()) names.push_back(item);
      item.clear();
    } else if (c != ' ') {
      item += c;
    }
  }
  if (names.empty()) throw InvalidArgument("variant must not be empty");
  const auto ps = parse_p_list(cfg.p);
  for (const auto& name : names) {
    const VariantTag tag = parse_variant_tag(name);
    if (tag == VariantTag::REM) {
      out.push_back({DisorderVariant::rem(), std::string("inf")});
      continue;
    }
    for (int p : ps) {
      if (p == 0) {
        out.push_back({DisorderVariant::rem(), std::string("inf")});
      } else {
        out.push_back({DisorderVariant{tag, p}, static_cast<std::int64_t>(p)});
      }
    }
  }
  return out;
}

QuenchedOptions quenched_options(const RunConfig& cfg) {
  QuenchedOptions opt;
  opt.engine = parse_engine(cfg.engine);
  opt.probes = cfg.probes;
  opt.krylov_dim = cfg.krylov_dim;
  opt.auto_dense_max_n = cfg.auto_dense_max_n;
  return opt;
}

void check_grids(const std::vector<double>& betas, const std::vector<double>& gammas) {
  for (double b : betas) {
    if (!(b > 0.0)) throw InvalidArgument("beta values must be > 0");
  }
  for (double g : gammas) {
    if (!(g >= 0.0)) throw InvalidArgument("gamma values must be >= 0");
  }
}

std::string coords(const DisorderVariant& v, int n, double beta, double gamma) {
  std::string s = "variant=" + to_string(v.tag);
  if (v.tag != VariantTag::REM) s += " p=" + std::to_string(v.p);
  return s + " n=" + std::to_string(n) + " beta=" + format_double(beta) +
         " gamma=" + format_double(gamma);
}

// Runs one grid point and rethrows failures with the grid coordinates.
PressureEstimate quenched_at(const RunConfig& cfg, const DisorderVariant& v, int n, double beta,
                             double gamma) {
  try {
    return quenched_pressure(v, n, beta, gamma, cfg.num_disorder, cfg.base_seed,
                             quenched_options(cfg));
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string(e.what()) + " [at " + coords(v, n, beta, gamma) + "]");
  } catch (const std::exception& e) {
    throw EngineError(std::string(e.what()) + " [at " + coords(v, n, beta, gamma) + "]");
  }
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void with_timing(std::vector<std::string>& columns, const RunConfig& cfg) {
  if (cfg.timing) columns.push_back("wall_time_s");
}

double method_cost(PressureMethod m, int n, const RunConfig& cfg) {
  const double dim = std::ldexp(1.0, n);
  switch (m) {
    case PressureMethod::ClassicalExact: return n * dim;
    case PressureMethod::DenseEig: return dim * dim * dim;
    case PressureMethod::StochasticLanczos:
      return cfg.probes * cfg.krylov_dim * (n + 1 + 2.0 * cfg.krylov_dim) * dim;
    case PressureMethod::ClosedForm: return 1.0;
  }
  return 0.0;
}

Cell optional_real(const std::optional<double>& x) {
  if (x) return *x;
  return std::monostate{};
}

std::optional<double> safe_one_over_p(double beta, double gamma, double p) {
  try {
    return one_over_p_correction(beta, gamma, p);
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

std::string branch_name(QremBranch b) { return b == QremBranch::Glass ? "glass" : "paramagnet"; }

}  // namespace

double estimate_cost(const std::string& command, const RunConfig& cfg) {
  if (command == "closed-form") return 1.0;
  const auto ns = parse_int_list(cfg.n, "n");
  const auto choices = variant_grid(cfg);
  const auto betas = parse_real_grid(cfg.beta, "beta");
  const auto gammas = parse_real_grid(cfg.gamma, "gamma");
  const QuenchedOptions opt = quenched_options(cfg);
  double total = 0.0;
  for (int n : ns) {
    if (n < 2 || n > kMaxSampleSpins) continue;
    const double sampling = n * std::ldexp(1.0, n);
    if (command == "cluster-census") {
      const auto eps = parse_real_grid(cfg.epsilon, "epsilon");
      total += choices.size() * eps.size() * cfg.num_disorder * 4.0 * sampling;
      continue;
    }
    for (double g : gammas) {
      const double per = method_cost(resolve_method(opt, n, g), n, cfg) + sampling;
      total += choices.size() * betas.size() * per * cfg.num_disorder;
    }
  }
  return total;
}

Table cmd_pressure(const RunConfig& cfg) {
  const auto choices = variant_grid(cfg);
  const auto ns = parse_int_list(cfg.n, "n");
  const auto betas = parse_real_grid(cfg.beta, "beta");
  const auto gammas = parse_real_grid(cfg.gamma, "gamma");
  check_grids(betas, gammas);
  std::vector<std::string> cols = {"method", "variant", "p", "n", "beta", "gamma", "value",
                                   "stderr", "disorder_stderr", "trace_stderr", "num_samples",
                                   "seed_range", "probes", "krylov_dim"};
  with_timing(cols, cfg);
  Table table(cols);
  for (const auto& ch : choices) {
    for (int n : ns) {
      for (double beta : betas) {
        for (double gamma : gammas) {
          const auto t0 = Clock::now();
          const auto est = quenched_at(cfg, ch.variant, n, beta, gamma);
          std::vector<Cell> row = {to_string(est.method), to_string(ch.variant.tag), ch.p_cell,
                                   std::int64_t{n}, beta, gamma, est.value, est.stderr_,
                                   est.disorder_stderr, est.trace_stderr,
                                   std::int64_t{est.num_samples},
                                   SeedRange{est.first_seed, est.last_seed},
                                   std::int64_t{cfg.probes}, std::int64_t{cfg.krylov_dim}};
          if (cfg.timing) row.emplace_back(seconds_since(t0));
          table.add(std::move(row));
        }
      }
    }
  }
  return table;
}

Table cmd_converge_p(const RunConfig& cfg) {
  const auto choices = variant_grid(cfg);
  if (choices.size() < 3) throw InvalidArgument("converge-p needs at least 3 values of p");
  const auto ns = parse_int_list(cfg.n, "n");
  const auto betas = parse_real_grid(cfg.beta, "beta");
  const auto gammas = parse_real_grid(cfg.gamma, "gamma");
  check_grids(betas, gammas);
  std::vector<std::string> cols = {"variant", "p", "n", "beta", "gamma", "method", "value",
                                   "stderr", "disorder_stderr", "trace_stderr", "phi_inf",
                                   "one_over_p", "gap", "gap_times_p", "num_samples",
                                   "seed_range", "probes", "krylov_dim"};
  with_timing(cols, cfg);
  Table table(cols);
  for (int n : ns) {
    for (double beta : betas) {
      for (double gamma : gammas) {
        const double phi_inf = qrem_pressure(beta, gamma);
        for (const auto& ch : choices) {
          const auto t0 = Clock::now();
          const auto est = quenched_at(cfg, ch.variant, n, beta, gamma);
          const bool rem = ch.variant.tag == VariantTag::REM;
          const double p = rem ? std::numeric_limits<double>::infinity() : ch.variant.p;
          const double gap = est.value - phi_inf;
          std::vector<Cell> row = {to_string(ch.variant.tag), ch.p_cell, std::int64_t{n}, beta,
                                   gamma, to_string(est.method), est.value, est.stderr_,
                                   est.disorder_stderr, est.trace_stderr, phi_inf,
                                   optional_real(safe_one_over_p(beta, gamma, p)), gap,
                                   rem ? Cell{std::monostate{}} : Cell{gap * p},
                                   std::int64_t{est.num_samples},
                                   SeedRange{est.first_seed, est.last_seed},
                                   std::int64_t{cfg.probes}, std::int64_t{cfg.krylov_dim}};
          if (cfg.timing) row.emplace_back(seconds_since(t0));
          table.add(std::move(row));
        }
      }
    }
  }
  return table;
}

Table cmd_phase_diagram(const RunConfig& cfg) {
  const auto choices = variant_grid(cfg);
  const auto ns = parse_int_list(cfg.n, "n");
  const auto betas = parse_real_grid(cfg.beta, "beta");
  const auto gammas = parse_real_grid(cfg.gamma, "gamma");
  check_grids(betas, gammas);
  std::vector<std::string> cols = {"variant", "p", "n", "beta", "gamma", "method", "value",
                                   "stderr", "qrem_closed_form", "branch", "empirical_branch",
                                   "critical_field", "num_samples", "seed_range", "probes",
                                   "krylov_dim"};
  with_timing(cols, cfg);
  Table table(cols);
  for (const auto& ch : choices) {
    for (int n : ns) {
      for (double beta : betas) {
        const double gc = critical_field(beta);
        for (double gamma : gammas) {
          const auto t0 = Clock::now();
          const auto est = quenched_at(cfg, ch.variant, n, beta, gamma);
          const double para = log_cosh(beta * gamma);
          const double glass = rem_pressure(beta);
          const auto empirical = std::abs(est.value - para) < std::abs(est.value - glass)
                                     ? QremBranch::Paramagnet
                                     : QremBranch::Glass;
          std::vector<Cell> row = {to_string(ch.variant.tag), ch.p_cell, std::int64_t{n}, beta,
                                   gamma, to_string(est.method), est.value, est.stderr_,
                                   qrem_pressure(beta, gamma),
                                   branch_name(qrem_branch(beta, gamma)), branch_name(empirical),
                                   gc, std::int64_t{est.num_samples},
                                   SeedRange{est.first_seed, est.last_seed},
                                   std::int64_t{cfg.probes}, std::int64_t{cfg.krylov_dim}};
          if (cfg.timing) row.emplace_back(seconds_since(t0));
          table.add(std::move(row));
        }
      }
    }
  }
  return table;
}

Table cmd_selfavg(const RunConfig& cfg) {
  if (cfg.num_disorder < 200) throw InvalidArgument("selfavg needs num_disorder >= 200");
  const auto choices = variant_grid(cfg);
  const auto ns = parse_int_list(cfg.n, "n");
  const auto betas = parse_real_grid(cfg.beta, "beta");
  const auto gammas = parse_real_grid(cfg.gamma, "gamma");
  const auto ts = parse_real_grid(cfg.t, "t");
  check_grids(betas, gammas);
  std::vector<std::string> cols = {"variant", "p", "n", "beta", "gamma", "method", "num_samples",
                                   "seed_range", "mean", "stderr", "t", "threshold",
                                   "exceedance", "bound", "binomial_stderr", "within_bound"};
  with_timing(cols, cfg);
  Table table(cols);
  for (const auto& ch : choices) {
    for (int n : ns) {
      for (double beta : betas) {
        for (double gamma : gammas) {
          const auto t0 = Clock::now();
          const auto est = quenched_at(cfg, ch.variant, n, beta, gamma);
          const double elapsed = seconds_since(t0);
          for (double t : ts) {
            const double threshold = t * beta / std::sqrt(static_cast<double>(n));
            int exceed = 0;
            for (double x : est.samples) exceed += std::abs(x - est.value) > threshold ? 1 : 0;
            const double freq = static_cast<double>(exceed) / est.num_samples;
            const double se = std::sqrt(freq * (1 - freq) / est.num_samples);
            const double bound = 2.0 * std::exp(-t * t / 4.0);
            std::vector<Cell> row = {to_string(ch.variant.tag), ch.p_cell, std::int64_t{n}, beta,
                                     gamma, to_string(est.method), std::int64_t{est.num_samples},
                                     SeedRange{est.first_seed, est.last_seed}, est.value,
                                     est.stderr_, t, threshold, freq, bound, se,
                                     freq <= bound + 4 * se};
            if (cfg.timing) row.emplace_back(elapsed);
            table.add(std::move(row));
          }
        }
      }
    }
  }
  return table;
}

Table cmd_cluster_census(const RunConfig& cfg) {
  const auto choices = variant_grid(cfg);
  const auto ns = parse_int_list(cfg.n, "n");
  const auto eps = parse_real_grid(cfg.epsilon, "epsilon");
  if (cfg.r.has_value() != cfg.L.has_value()) {
    throw InvalidArgument("cluster-census needs both r and L, or neither");
  }
  std::optional<TailScale> scale;
  if (cfg.r) scale = TailScale{*cfg.r, *cfg.L};
  std::vector<std::string> cols = {"seed",      "epsilon", "r",           "num_components",
                                   "max_diameter", "max_component_size", "T_norm",
                                   "bound_2N_sqrt_rL", "event_flag", "n", "p", "variant", "L",
                                   "norm_status", "schedule_status"};
  with_timing(cols, cfg);
  Table table(cols);
  for (const auto& ch : choices) {
    for (int n : ns) {
      for (double e : eps) {
        if (!(e > 0.0)) throw InvalidArgument("epsilon values must be > 0");
        const auto t0 = Clock::now();
        std::string status;
        if (!scale) {
          if (ch.variant.tag == VariantTag::REM) {
            throw InvalidArgument("the REM has no schedule; give r and L explicitly");
          }
          schedule_unchecked(ch.variant.p, e, &status);
          if (!status.empty()) {
            std::vector<Cell> row(cols.size(), std::monostate{});
            row[1] = e;
            row[9] = std::int64_t{n};
            row[10] = ch.p_cell;
            row[11] = to_string(ch.variant.tag);
            row[13] = std::string("not computed");
            row[14] = "inadmissible: " + status;
            table.add(std::move(row));
            continue;
          }
        }
        TailReport rep;
        try {
          rep = diameter_tail_experiment(ch.variant, n, e, cfg.num_disorder, cfg.base_seed, scale);
        } catch (const InvalidArgument& err) {
          throw InvalidArgument(std::string(err.what()) + " [at epsilon=" + format_double(e) + "]");
        } catch (const std::exception& err) {
          throw EngineError(std::string(err.what()) + " [at epsilon=" + format_double(e) + "]");
        }
        const double elapsed = seconds_since(t0);
        for (const auto& r : rep.rows) {
          std::vector<Cell> row = {r.seed, r.epsilon, r.r,
                                   static_cast<std::uint64_t>(r.num_components),
                                   std::int64_t{r.max_diameter},
                                   static_cast<std::uint64_t>(r.max_component_size), r.t_norm,
                                   r.bound_2n_sqrt_rl, r.event, std::int64_t{n}, ch.p_cell,
                                   to_string(ch.variant.tag), std::int64_t{r.L}, r.norm_status,
                                   rep.schedule_status};
          if (cfg.timing) row.emplace_back(elapsed);
          table.add(std::move(row));
        }
      }
    }
  }
  return table;
}

Table cmd_closed_form(const RunConfig& cfg) {
  const auto betas = parse_real_grid(cfg.beta, "beta");
  const auto gammas = parse_real_grid(cfg.gamma, "gamma");
  const auto ps = parse_p_list(cfg.p);
  check_grids(betas, gammas);
  Table table({"beta", "gamma", "p", "rem_pressure", "qrem_pressure", "critical_field", "branch",
               "one_over_p", "note"});
  for (double beta : betas) {
    for (double gamma : gammas) {
      for (int p : ps) {
        const double pd = p == 0 ? std::numeric_limits<double>::infinity() : p;
        const auto corr = safe_one_over_p(beta, gamma, pd);
        table.add({beta, gamma, p == 0 ? Cell{std::string("inf")} : Cell{std::int64_t{p}},
                   rem_pressure(beta), qrem_pressure(beta, gamma), critical_field(beta),
                   branch_name(qrem_branch(beta, gamma)), optional_real(corr),
                   corr ? std::string() : std::string("formula undefined at transition")});
      }
    }
  }
  return table;
}

}  // namespace qrem::cli
