#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "oracles.hpp"
#include "qrem/closed_form.hpp"
#include "qrem/error.hpp"
#include "qrem/geometry.hpp"
#include "qrem/operators.hpp"

using namespace qrem;

namespace {

std::vector<Word> words(const std::vector<SpinConfiguration>& path) {
  std::vector<Word> out;
  for (const auto& s : path) out.push_back(s.bits());
  return out;
}

}  // namespace

TEST(DeepHoles, Examples) {
  const auto real = sample(DisorderVariant::rem(), 10, 1);
  EXPECT_TRUE(deep_holes(real, -ground_state_density(real) + 1e-9).mask.empty());
  const auto half = deep_holes(real, 1e-9).mask.count() / 1024.0;
  EXPECT_GT(half, 0.4);
  EXPECT_LT(half, 0.6);

  std::vector<double> table(16, 0.0);
  table[5] = -4.0;
  const auto single = deep_holes(DisorderRealization::from_table(4, table), 0.5);
  EXPECT_EQ(single.mask.members(), std::vector<Word>{5});
  // Strict inequality: exactly -eps N is not deep.
  table[5] = -2.0;
  EXPECT_TRUE(deep_holes(DisorderRealization::from_table(4, table), 0.5).mask.empty());
  EXPECT_THROW(deep_holes(real, 0.0), InvalidArgument);
}

TEST(DeepHoles, Nested) {
  const auto real = sample(DisorderVariant::full(3), 10, 3);
  for (double e = 0.1; e < 1.5; e += 0.1) {
    EXPECT_TRUE(deep_holes(real, e + 0.1).mask.is_subset_of(deep_holes(real, e).mask));
  }
}

TEST(Augment, Examples) {
  EXPECT_TRUE(augment(SubsetMask(6)).empty());
  EXPECT_EQ(augment(SubsetMask::from_members(6, {9})).count(), 7u);
  const auto two = SubsetMask::from_members(6, {0, 3});
  EXPECT_EQ(augment(two).count(), 2u * 7u - 2u);
  EXPECT_TRUE(two.is_subset_of(augment(two)));
}

TEST(Components, Examples) {
  const auto unit_ball = ball(SpinConfiguration::all_down(10), 1);
  const auto one = connected_components(unit_ball, 0.5);
  ASSERT_EQ(one.components.size(), 1u);
  EXPECT_EQ(one.diameters[0], 2);

  const auto pair = SubsetMask::from_members(10, {0, 0b11111});
  EXPECT_EQ(connected_components(pair, 1.0 - 1e-9).components.size(), 2u);
  EXPECT_EQ(connected_components(pair, 0.999).components.size(), 2u);
  EXPECT_EQ(connected_components(pair, 0.5).components.size(), 2u);
  EXPECT_EQ(connected_components(SubsetMask::from_members(10, {0, 0b1111}), 0.9).components.size(), 1u);
  EXPECT_TRUE(connected_components(pair, 0.15).degenerate_scale);
  EXPECT_THROW(connected_components(pair, 1.0), InvalidArgument);
}

TEST(Components, PartitionMatchesClosureOracle) {
  const auto real = sample(DisorderVariant::rem(), 10, 8);
  const auto region = augment(deep_holes(real, 0.9));
  const auto members = region.members();
  const auto labels = oracle::closure_labels(members, 10, 0.5);
  const auto decomp = connected_components(region, 0.5);
  std::size_t total = 0;
  for (std::size_t c = 0; c < decomp.components.size(); ++c) {
    const auto cm = decomp.components[c].members();
    total += cm.size();
    EXPECT_EQ(decomp.sizes[c], cm.size());
    EXPECT_EQ(decomp.diameters[c], diameter(cm));
    for (Word w : cm) {
      const auto i = std::lower_bound(members.begin(), members.end(), w) - members.begin();
      const auto j = std::lower_bound(members.begin(), members.end(), cm[0]) - members.begin();
      EXPECT_EQ(labels[i], labels[j]);
    }
  }
  EXPECT_EQ(total, members.size());
  const int distinct = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  EXPECT_EQ(static_cast<int>(decomp.components.size()), distinct);
}

TEST(LastExitPath, NotFoundWhenDiameterSmall) {
  const auto comp = ball(SpinConfiguration::all_down(12), 2);
  EXPECT_FALSE(last_exit_path(comp, comp, 0.5, 2).has_value());
}

TEST(LastExitPath, RequiresConnectedComponent) {
  const auto comp = SubsetMask::from_members(12, {0, full_word(12)});
  EXPECT_THROW(last_exit_path(comp, comp, 0.5, 2), InvalidArgument);
  EXPECT_THROW(last_exit_path(comp, comp, 0.5, 1), InvalidArgument);
}

TEST(LastExitPath, LineOfFlips) {
  // Points 0, 1, 3, 7, ... along one line of flips: a chain spanning all 16 spins.
  const int n = 16;
  std::vector<Word> line;
  for (int k = 0; k <= n; ++k) line.push_back(full_word(k));
  const auto comp = SubsetMask::from_members(n, line);
  for (double r : {0.2, 0.25, 0.3}) {
    for (int L = 2; L <= 5; ++L) {
      const auto path = last_exit_path(comp, comp, r, L);
      if (n > n * r * L) {
        ASSERT_TRUE(path.has_value()) << r << " " << L;
        EXPECT_GE(static_cast<int>(path->size()), L);
        const auto verdict = oracle::check_path(words(*path), comp, n, r);
        EXPECT_TRUE(verdict.ok()) << r << " " << L;
      } else {
        EXPECT_FALSE(path.has_value());
      }
    }
  }
}

TEST(LastExitPath, RandomClustersPassChecker) {
  int found = 0;
  for (int seed = 0; seed < 40; ++seed) {
    const auto real = sample(DisorderVariant::full(2), 12, 500 + seed);
    const auto deep = deep_holes(real, 0.3).mask;
    const double r = 0.2;
    const auto decomp = connected_components(augment(deep), r);
    for (const auto& comp : decomp.components) {
      const auto path = last_exit_path(comp, deep, r, 2);
      if (!path) continue;
      ++found;
      EXPECT_TRUE(oracle::check_path(words(*path), deep, 12, r).ok()) << seed;
    }
  }
  EXPECT_GT(found, 0);
}

TEST(PathSumVariance, Examples) {
  const auto full3 = DisorderVariant::full(3);
  const std::vector<SpinConfiguration> one = {SpinConfiguration::all_down(10)};
  EXPECT_NEAR(path_sum_variance(one, full3, 10), 10.0, 1e-12);
  const std::vector<SpinConfiguration> antipodes = {SpinConfiguration::all_down(10),
                                                    SpinConfiguration::all_up(10)};
  EXPECT_NEAR(path_sum_variance(antipodes, DisorderVariant::full(4), 10), 4.0 * 10, 1e-12);
  EXPECT_NEAR(path_sum_variance(antipodes, full3, 10), 0.0, 1e-12);
  EXPECT_THROW(path_sum_variance({}, full3, 10), InvalidArgument);
  EXPECT_DOUBLE_EQ(path_sum_variance_bound(3, 10, 0.5, 2), 2 * 3 * 10 * (1 + 3 * 0.25));
}

TEST(PathSumVariance, MatchesMonteCarlo) {
  const int n = 8;
  const auto v = DisorderVariant::full(3);
  const std::vector<SpinConfiguration> path = {SpinConfiguration(0, n), SpinConfiguration(0b1111, n),
                                               SpinConfiguration(0b11110000, n)};
  const double exact = path_sum_variance(path, v, n);
  const int samples = 4000;
  double s1 = 0.0, s2 = 0.0;
  for (int k = 0; k < samples; ++k) {
    const auto real = sample(v, n, 9000 + k);
    double s = 0.0;
    for (const auto& x : path) s += real.energy(x.bits());
    s1 += s * s;
    s2 += s * s * s * s;
  }
  const double mean = s1 / samples;
  const double se = std::sqrt((s2 / samples - mean * mean) / samples);
  EXPECT_NEAR(mean, exact, 4 * se);
}

TEST(Schedule, ClosedFormScale) {
  std::string reason;
  const auto s = schedule_unchecked(50, 0.5, &reason);
  EXPECT_NEAR(s.r_p * 50, 2.406076, 1e-6);
  EXPECT_NEAR(s.r_p * 50, std::log(8 * std::numbers::ln2 / 0.5), 1e-12);
  EXPECT_NEAR(s.delta_p, std::pow(1 - s.r_p, 50), 1e-15);
  EXPECT_LE(s.delta_p, 0.5 / (4 * kBetaC * kBetaC));
  const auto far = schedule_unchecked(1000000, 0.5, &reason);
  EXPECT_NEAR(far.delta_p, 0.5 / (4 * kBetaC * kBetaC), 1e-5);
  EXPECT_NEAR(0.5 / (4 * kBetaC * kBetaC), 0.090169, 1e-6);
}

TEST(Schedule, InadmissibleReportsReason) {
  std::string reason;
  schedule_unchecked(2, 0.5, &reason);
  EXPECT_FALSE(reason.empty());
  EXPECT_THROW(schedule(2, 0.5), InadmissibleSchedule);
  EXPECT_THROW(schedule(0, 0.5), InvalidArgument);
}

TEST(Schedule, AdmissibleFieldsConsistent) {
  // Larger deviations give admissible schedules at moderate p.
  const auto s = schedule(100, 2.0);
  EXPECT_GT(s.c_p, 0.0);
  EXPECT_GE(s.L_p, std::ceil(s.window_low));
  EXPECT_LE(s.L_p, s.window_high);
  const double g = binary_entropy(s.r_p);
  EXPECT_NEAR(s.c_p, s.L_p * (2.0 * 2.0 / (4 * (1 + s.L_p * s.delta_p)) - g) - std::numbers::ln2,
              1e-12);
}

TEST(NormBound, EmptyAndSkips) {
  const auto empty = connected_components(SubsetMask(12), 0.1);
  const auto rep = norm_bound_check(empty, 0.1, 2);
  EXPECT_TRUE(rep.checked);
  EXPECT_EQ(rep.norm, 0.0);
  EXPECT_TRUE(rep.holds);
  EXPECT_FALSE(norm_bound_check(empty, 0.3, 2).checked);
  EXPECT_FALSE(norm_bound_check(empty, 0.01, 2).checked);
}

TEST(NormBound, RemDeepHoles) {
  const auto real = sample(DisorderVariant::rem(), 12, 4);
  const auto decomp = connected_components(augment(deep_holes(real, 1.0)), 0.1);
  const auto rep = norm_bound_check(decomp, 0.1, 4);
  if (rep.checked) EXPECT_TRUE(rep.holds);
  EXPECT_LE(rep.norm, rep.bound + 1e-9);
}

TEST(NormBound, DirectSumOfFarComponents) {
  const int n = 12;
  auto a = ball(SpinConfiguration::all_down(n), 1);
  const auto b = ball(SpinConfiguration::all_up(n), 2);
  const auto both = a.united(b);
  const auto decomp = connected_components(both, 0.3);
  ASSERT_EQ(decomp.components.size(), 2u);
  double max_norm = 0.0;
  for (const auto& c : decomp.components) max_norm = std::max(max_norm, operator_norm(c));
  EXPECT_NEAR(max_norm, operator_norm(both), 1e-9);
}

TEST(TailExperiment, HugeEpsilonNeverFires) {
  const auto rep = diameter_tail_experiment(DisorderVariant::full(4), 10, 50.0, 20, 1, TailScale{0.5, 2});
  EXPECT_EQ(rep.frequency, 0.0);
  for (const auto& row : rep.rows) EXPECT_EQ(row.num_components, 0u);
  EXPECT_FALSE(rep.theory_bound.has_value());
}

TEST(TailExperiment, FrequencyMonotoneInEpsilon) {
  double prev = 1.1;
  for (double eps : {0.6, 0.9, 1.2, 1.5}) {
    const auto rep =
        diameter_tail_experiment(DisorderVariant::full(4), 12, eps, 100, 7, TailScale{0.1, 2}, false);
    EXPECT_LE(rep.frequency, prev + 4 * rep.binomial_stderr) << eps;
    prev = rep.frequency;
  }
}

TEST(TailExperiment, Reported) {
  const auto rep = diameter_tail_experiment(DisorderVariant::full(4), 12, 1.2, 200, 3, TailScale{0.5, 2});
  EXPECT_EQ(rep.rows.size(), 200u);
  EXPECT_GE(rep.frequency, 0.0);
  EXPECT_LE(rep.frequency, 1.0);
  EXPECT_FALSE(rep.schedule_status.empty());
}
