#include "app.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "grid.hpp"
#include "qrem/error.hpp"

namespace qrem::cli {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += parts[i];
  }
  return s;
}

// Grid options accept "a,b,c" or "lo:hi:count" on the command line and in the
// config file; values are kept as text and parsed by the command.
struct GridText {
  std::vector<std::string> parts;
  std::string text(const std::string& fallback) const { return parts.empty() ? fallback : join(parts); }
};

std::string default_output(const std::string& command, Format f) {
  const char* dir = std::getenv("QREM_OUTPUT_DIR");
  std::filesystem::path base = (dir && *dir) ? dir : ".";
  return (base / (command + "." + extension(f))).string();
}

void emit(const Table& table, const std::string& path, Format format) {
  if (path == "-") {
    table.write(std::cout, format);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot open output file " + path);
  table.write(out, format);
  out.flush();
  if (!out) throw InvalidArgument("failed writing output file " + path);
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Numerical lab for quantum p-spin glasses and the quantum random energy model"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");

  RunConfig cfg;
  GridText variant, p, n, beta, gamma, epsilon, t;
  std::string output;
  std::string format = "csv";
  int threads = 0;
  double r = 0.0;
  int L = 0;

  auto grid = [&app](const std::string& name, GridText& target, const std::string& help) {
    app.add_option(name, target.parts, help)->delimiter(',')->allow_extra_args(false);
  };
  grid("--variant", variant, "strict, full or rem (comma list)");
  grid("--p", p, "Interaction order(s); 'inf' selects the REM");
  grid("--n", n, "Spin count(s)");
  grid("--beta", beta, "Inverse temperature grid: list or lo:hi:count");
  grid("--gamma", gamma, "Transverse field grid: list or lo:hi:count");
  grid("--epsilon", epsilon, "Deep-hole threshold grid");
  grid("--t", t, "Deviation multipliers for selfavg");
  app.add_option("--num-disorder", cfg.num_disorder, "Disorder realizations per grid point")
      ->check(CLI::PositiveNumber);
  app.add_option("--probes", cfg.probes, "Stochastic trace probes")->check(CLI::PositiveNumber);
  app.add_option("--krylov-dim", cfg.krylov_dim, "Lanczos steps per probe")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.base_seed, "Base seed; realization k uses seed + k");
  app.add_option("--engine", cfg.engine, "auto, classical, dense or stochastic");
  app.add_option("--auto-dense-max-n", cfg.auto_dense_max_n, "Largest n the auto engine runs densely");
  app.add_option("--r", r, "Cluster scale (requires --L)");
  app.add_option("--L", L, "Cluster length budget (requires --r)");
  app.add_option("-o,--output", output, "Output path, '-' for stdout");
  app.add_option("--format", format, "csv or json (newline-delimited)");
  app.add_option("--threads", threads, "Worker threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-cost", cfg.max_cost, "Refuse runs whose estimated cost exceeds this");
  app.add_flag("--timing", cfg.timing, "Add a wall_time_s column (not reproducible)");

  using Runner = std::function<Table(const RunConfig&)>;
  const std::map<std::string, std::pair<std::string, Runner>> commands = {
      {"pressure", {"Quenched pressure over a parameter grid", cmd_pressure}},
      {"converge-p", {"Convergence in p toward the QREM limit", cmd_converge_p}},
      {"phase-diagram", {"Pressure over a (beta, gamma) grid with closed-form branches", cmd_phase_diagram}},
      {"selfavg", {"Concentration of the free energy across disorder", cmd_selfavg}},
      {"cluster-census", {"Deep-hole cluster diameters and restricted hopping norms", cmd_cluster_census}},
      {"closed-form", {"Closed-form REM and QREM pressures", cmd_closed_form}},
  };
  for (const auto& [name, entry] : commands) {
    app.add_subcommand(name, entry.first)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    cfg.variant = variant.text(cfg.variant);
    cfg.p = p.text(cfg.p);
    cfg.n = n.text(cfg.n);
    cfg.beta = beta.text(cfg.beta);
    cfg.gamma = gamma.text(cfg.gamma);
    cfg.epsilon = epsilon.text(cfg.epsilon);
    cfg.t = t.text(cfg.t);
    if (app.count("--r")) cfg.r = r;
    if (app.count("--L")) cfg.L = L;
    if (command == "cluster-census" && !app.count("--p") && !app.count("--variant")) cfg.p = "4";
    const Format fmt = parse_format(format);
    if (output.empty()) output = default_output(command, fmt);
    if (threads > 0) omp_set_num_threads(threads);

    const double cost = estimate_cost(command, cfg);
    if (cost > cfg.max_cost) {
      throw InvalidArgument("estimated cost " + format_double(cost) + " exceeds --max-cost " +
                            format_double(cfg.max_cost));
    }
    const Table table = commands.at(command).second(cfg);
    emit(table, output, fmt);
  } catch (const InvalidArgument& e) {
    std::cerr << "qrem " << command << ": invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qrem " << command << ": engine failure: " << e.what() << '\n';
    return kExitEngine;
  }
  return kExitOk;
}

}  // namespace qrem::cli
