#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "table.hpp"

namespace qrem::cli {

// Every output is a pure function of this configuration.
struct RunConfig {
  std::string variant = "full";
  std::string p = "3";
  std::string n = "10";
  std::string beta = "1";
  std::string gamma = "0";
  std::string epsilon = "1";
  std::string t = "1,2,3,4";
  int num_disorder = 20;
  int probes = 16;
  int krylov_dim = 40;
  std::uint64_t base_seed = 1;
  std::string engine = "auto";
  int auto_dense_max_n = 10;
  std::optional<double> r;
  std::optional<int> L;
  double max_cost = 1e13;
  bool timing = false;
};

Table cmd_pressure(const RunConfig& cfg);
Table cmd_converge_p(const RunConfig& cfg);
Table cmd_phase_diagram(const RunConfig& cfg);
Table cmd_selfavg(const RunConfig& cfg);
Table cmd_cluster_census(const RunConfig& cfg);
Table cmd_closed_form(const RunConfig& cfg);

// Rough operation count of a run, compared against max_cost before any work.
double estimate_cost(const std::string& command, const RunConfig& cfg);

}  // namespace qrem::cli
