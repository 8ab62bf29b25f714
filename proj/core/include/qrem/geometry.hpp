#pragma once

// Geometry of extreme negative deviations: deep-hole sets, their one-step
// augmentation, clusters at connectivity scale r, and last-exit paths that
// thin a long cluster into widely separated deep holes.
//
// Distances are integers and scales are real; "dist < N r / 2" is evaluated
// as 2 dist < N r throughout.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrem/disorder.hpp"
#include "qrem/error.hpp"
#include "qrem/hypercube.hpp"

namespace qrem {

struct DeepHoleSet {
  SubsetMask mask;
  double epsilon = 0.0;
  DisorderVariant variant;
  std::uint64_t seed = 0;
};

// sigma is a deep hole iff U(sigma) < -epsilon N.
DeepHoleSet deep_holes(const DisorderRealization& real, double epsilon);

// { sigma : dist(sigma, set) <= 1 }.
SubsetMask augment(const SubsetMask& set);
inline SubsetMask augment(const DeepHoleSet& set) { return augment(set.mask); }

struct ClusterDecomposition {
  int n = 0;
  double r = 0.0;
  std::vector<SubsetMask> components;  // ordered by smallest member
  std::vector<int> diameters;
  std::vector<std::size_t> sizes;
  // N r / 2 <= 1: only identical points would be linked.
  bool degenerate_scale = false;

  int max_diameter() const;
  std::size_t max_size() const;
};

inline bool within_half_scale(int dist, int n, double r) { return 2.0 * dist < n * r; }

// Maximal components of the graph on `region` with edges dist < N r / 2.
ClusterDecomposition connected_components(const SubsetMask& region, double r);

// True if all members of `set` are linked by steps of size < N r / 2 inside it.
bool is_r_connected(const SubsetMask& set, double r);

int diameter(const std::vector<Word>& members);

// Last-exit path of L deep holes inside one cluster.
//
// Throws InvalidArgument if `component` is not r-connected. Returns nullopt
// when no pair of deep holes of the component that are linked through deep
// holes (steps < N r / 2) lies more than N r L apart.
std::optional<std::vector<SpinConfiguration>> last_exit_path(const SubsetMask& component,
                                                             const SubsetMask& deep, double r,
                                                             int L);

// E[S^2] for S = sum_k U(sigma^k), exact from the covariance.
double path_sum_variance(const std::vector<SpinConfiguration>& path,
                         const DisorderVariant& variant, int n);

// 2 L N [1 + L (1 - r)^p].
double path_sum_variance_bound(int L, int n, double r, int p);

struct ParameterSchedule {
  int p = 0;
  double epsilon = 0.0;
  double r_p = 0.0;
  double delta_p = 0.0;
  int L_p = 0;
  double c_p = 0.0;
  double window_low = 0.0;
  double window_high = 0.0;
};

class InadmissibleSchedule : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Correlation scale, cluster length and large-deviation rate for order p.
// Throws InadmissibleSchedule unless r_p < 1, gamma(r_p) < eps^2 / 4, the
// L window contains a positive integer, and c_p > 0.
ParameterSchedule schedule(int p, double epsilon);

// Same computation without the admissibility checks; `reason` is empty
// when the schedule is admissible.
ParameterSchedule schedule_unchecked(int p, double epsilon, std::string* reason);

struct NormBoundReport {
  bool checked = false;
  std::string skip_reason;
  double norm = 0.0;     // max over components of ||T_C||
  double bound = 0.0;    // 2 N sqrt(r L)
  bool holds = true;
};

NormBoundReport norm_bound_check(const ClusterDecomposition& decomp, double r, int L);

struct CensusRow {
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double r = 0.0;
  int L = 0;
  std::size_t num_components = 0;
  int max_diameter = 0;
  std::size_t max_component_size = 0;
  double t_norm = 0.0;
  double bound_2n_sqrt_rl = 0.0;
  bool event = false;  // max diameter > N r L
  std::string norm_status;
};

struct TailReport {
  std::vector<CensusRow> rows;
  double frequency = 0.0;
  double binomial_stderr = 0.0;
  // e^{-N c_p(eps)} when (r, L) came from an admissible schedule.
  std::optional<double> theory_bound;
  std::string schedule_status;
};

struct TailScale {
  double r = 0.0;
  int L = 0;
};

// Frequency of {max cluster diameter > N r L} over seeds base_seed, ...
// Uses (r, L) from `schedule(p, epsilon)` unless `scale` is given.
TailReport diameter_tail_experiment(const DisorderVariant& variant, int n, double epsilon,
                                    int num_samples, std::uint64_t base_seed,
                                    std::optional<TailScale> scale = std::nullopt,
                                    bool compute_norms = true);

}  // namespace qrem
