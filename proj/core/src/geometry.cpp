#include "qrem/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "qrem/closed_form.hpp"
#include "qrem/operators.hpp"

namespace qrem {

DeepHoleSet deep_holes(const DisorderRealization& real, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("deep-hole threshold epsilon must be positive");
  const int n = real.n();
  const double threshold = -epsilon * n;
  SubsetMask mask(n);
  const auto e = real.energies();
  for (Word w = 0; w < e.size(); ++w) {
    if (e[w] < threshold) mask.insert(w);
  }
  return {std::move(mask), epsilon, real.variant(), real.seed()};
}

SubsetMask augment(const SubsetMask& set) {
  SubsetMask out(set.n());
  const int n = set.n();
  set.for_each([&](Word w) {
    out.insert(w);
    for (int j = 0; j < n; ++j) out.insert(w ^ (Word{1} << j));
  });
  return out;
}

int ClusterDecomposition::max_diameter() const {
  return diameters.empty() ? 0 : *std::max_element(diameters.begin(), diameters.end());
}

std::size_t ClusterDecomposition::max_size() const {
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Largest integer distance d with 2 d < N r.
int max_link_distance(int n, double r) {
  int d = static_cast<int>(std::ceil(n * r / 2.0)) - 1;
  while (d + 1 <= n && within_half_scale(d + 1, n, r)) ++d;
  while (d >= 0 && !within_half_scale(d, n, r)) --d;
  return std::min(d, n);
}

// Links every pair of members at distance < N r / 2. Picks between an
// all-pairs scan and probing each member's small ball, whichever is cheaper.
void link_members(const std::vector<Word>& members, int n, double r, UnionFind& uf) {
  const int dmax = max_link_distance(n, r);
  if (dmax < 1 || members.size() < 2) return;
  const double pair_cost = 0.5 * static_cast<double>(members.size()) * members.size();
  const double ball_cost = static_cast<double>(members.size()) * (ball_cardinality(n, dmax) - 1.0);
  if (pair_cost <= ball_cost) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (std::popcount(members[i] ^ members[j]) <= dmax) uf.unite(i, j);
      }
    }
    return;
  }
  std::unordered_map<Word, std::size_t> position;
  position.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) position.emplace(members[i], i);
  std::vector<Word> offsets;
  for (Word x = 1; x < cube_size(n); ++x) {
    if (std::popcount(x) <= dmax) offsets.push_back(x);
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (Word x : offsets) {
      const auto it = position.find(members[i] ^ x);
      if (it != position.end() && it->second > i) uf.unite(i, it->second);
    }
  }
}

// Groups member indices by union-find root, ordered by smallest member.
std::vector<std::vector<std::size_t>> groups(const std::vector<Word>& members, UnionFind& uf) {
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::size_t root = uf.find(i);
    auto [it, inserted] = slot.emplace(root, out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(i);
  }
  return out;
}

}  // namespace

int diameter(const std::vector<Word>& members) {
  int d = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      d = std::max(d, std::popcount(members[i] ^ members[j]));
    }
  }
  return d;
}

ClusterDecomposition connected_components(const SubsetMask& region, double r) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("connectivity scale r must lie in (0, 1)");
  ClusterDecomposition out;
  out.n = region.n();
  out.r = r;
  out.degenerate_scale = region.n() * r / 2.0 <= 1.0;
  const auto members = region.members();
  UnionFind uf(members.size());
  link_members(members, region.n(), r, uf);
  for (const auto& group : groups(members, uf)) {
    std::vector<Word> words;
    words.reserve(group.size());
    for (auto i : group) words.push_back(members[i]);
    out.diameters.push_back(diameter(words));
    out.sizes.push_back(words.size());
    out.components.push_back(SubsetMask::from_members(region.n(), words));
  }
  return out;
}

bool is_r_connected(const SubsetMask& set, double r) {
  const auto members = set.members();
  if (members.size() <= 1) return true;
  UnionFind uf(members.size());
  link_members(members, set.n(), r, uf);
  const std::size_t root = uf.find(0);
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (uf.find(i) != root) return false;
  }
  return true;
}

std::optional<std::vector<SpinConfiguration>> last_exit_path(const SubsetMask& component,
                                                             const SubsetMask& deep, double r,
                                                             int L) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("connectivity scale r must lie in (0, 1)");
  if (L < 2) throw InvalidArgument("last-exit path needs L >= 2");
  if (component.n() != deep.n()) throw DimensionError("component and deep-hole set differ in N");
  if (!is_r_connected(component, r)) {
    throw InvalidArgument("last_exit_path: component is not r-connected");
  }
  const int n = component.n();
  const auto sites = component.intersected(deep).members();
  if (sites.size() < 2) return std::nullopt;

  // Graph on the deep holes with steps < N r / 2.
  const std::size_t m = sites.size();
  std::vector<std::vector<std::size_t>> adj(m);
  UnionFind uf(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (within_half_scale(std::popcount(sites[i] ^ sites[j]), n, r)) {
        adj[i].push_back(j);
        adj[j].push_back(i);
        uf.unite(i, j);
      }
    }
  }

  // Extremal pair within one piece; ties resolved by the first pair in
  // lexicographic word order.
  int best = -1;
  std::size_t a = 0, b = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const int d = std::popcount(sites[i] ^ sites[j]);
      if (d > best && uf.find(i) == uf.find(j)) {
        best = d;
        a = i;
        b = j;
      }
    }
  }
  if (best < 0 || !(best > n * r * L)) return std::nullopt;

  // Fine chain tau^0..tau^M: a shortest path, hence self-avoiding.
  std::vector<std::size_t> prev(m, m);
  std::vector<bool> seen(m, false);
  std::queue<std::size_t> frontier;
  frontier.push(a);
  seen[a] = true;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    if (u == b) break;
    for (auto v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        prev[v] = u;
        frontier.push(v);
      }
    }
  }
  std::vector<Word> chain;
  for (std::size_t v = b; v != m; v = prev[v]) chain.push_back(sites[v]);
  std::reverse(chain.begin(), chain.end());

  // Thinning: sigma^{j+1} is the last chain point inside the union of open
  // radius-Nr balls around sigma^0..sigma^j. Every later chain point avoids
  // that union, which places sigma^{j+1} in the annulus around sigma^j.
  const std::size_t M = chain.size() - 1;
  std::vector<Word> picked = {chain[0]};
  std::size_t current = 0;
  const auto in_union = [&](Word w) {
    for (Word s : picked) {
      if (std::popcount(s ^ w) < n * r) return true;
    }
    return false;
  };
  while (static_cast<int>(picked.size()) < L && current < M) {
    std::size_t last = current;
    for (std::size_t i = M; i > current; --i) {
      if (in_union(chain[i])) {
        last = i;
        break;
      }
    }
    if (last == M) break;
    picked.push_back(chain[last]);
    current = last;
  }
  if (static_cast<int>(picked.size()) < L) {
    throw EngineError("last-exit thinning produced fewer than L sites");
  }
  std::vector<SpinConfiguration> path;
  for (Word w : picked) path.emplace_back(w, n);
  return path;
}

double path_sum_variance(const std::vector<SpinConfiguration>& path, const DisorderVariant& variant,
                         int n) {
  if (path.empty()) throw InvalidArgument("path_sum_variance on an empty path");
  std::vector<double> cov(static_cast<std::size_t>(n) + 1);
  for (int d = 0; d <= n; ++d) cov[d] = covariance_exact(variant, n, d);
  double s = 0.0;
  for (const auto& a : path) {
    for (const auto& b : path) s += cov[hamming_distance(a, b)];
  }
  return s;
}

double path_sum_variance_bound(int L, int n, double r, int p) {
  return 2.0 * L * n * (1.0 + L * std::pow(1.0 - r, p));
}

ParameterSchedule schedule_unchecked(int p, double epsilon, std::string* reason) {
  if (p < 1) throw InvalidArgument("schedule needs p >= 1");
  if (!(epsilon > 0.0)) throw InvalidArgument("schedule needs epsilon > 0");
  ParameterSchedule s;
  s.p = p;
  s.epsilon = epsilon;
  const double bc2 = kBetaC * kBetaC;
  s.r_p = std::log(4.0 * bc2 / epsilon) / p;
  std::string why;
  if (!(s.r_p > 0.0 && s.r_p < 1.0)) {
    why = "r_p outside (0, 1)";
    if (reason) *reason = why;
    return s;
  }
  s.delta_p = std::pow(1.0 - s.r_p, p);
  const double g = binary_entropy(s.r_p);
  const double sg = std::sqrt(g);
  s.window_low = (epsilon / (4.0 * sg) - 1.0) / s.delta_p;
  s.window_high = (epsilon / (2.0 * sg) - 1.0) / s.delta_p;
  const double lowest = std::max(1.0, std::ceil(s.window_low));
  s.L_p = static_cast<int>(std::min(lowest, 1e9));
  s.c_p = s.L_p * (epsilon * epsilon / (4.0 * (1.0 + s.L_p * s.delta_p)) - g) -
          std::numbers::ln2;
  if (!(g < epsilon * epsilon / 4.0)) {
    why = "binary entropy of r_p is not below eps^2/4";
  } else if (lowest > s.window_high) {
    why = "L window [" + std::to_string(s.window_low) + ", " + std::to_string(s.window_high) +
          "] holds no positive integer";
  } else if (!(s.c_p > 0.0)) {
    why = "c_p(eps) = " + std::to_string(s.c_p) + " is not positive";
  }
  if (reason) *reason = why;
  return s;
}

ParameterSchedule schedule(int p, double epsilon) {
  std::string reason;
  auto s = schedule_unchecked(p, epsilon, &reason);
  if (!reason.empty()) {
    throw InadmissibleSchedule("schedule inadmissible at p=" + std::to_string(p) + ": " + reason);
  }
  return s;
}

NormBoundReport norm_bound_check(const ClusterDecomposition& decomp, double r, int L) {
  NormBoundReport rep;
  const int n = decomp.n;
  const double rl = r * L;
  rep.bound = 2.0 * n * std::sqrt(rl);
  if (!(rl > 0.0 && rl < 0.5)) {
    rep.skip_reason = "rL outside (0, 1/2)";
    return rep;
  }
  if (!(n > 1.0 / rl)) {
    rep.skip_reason = "N <= 1/(rL)";
    return rep;
  }
  if (decomp.max_diameter() > n * rl) {
    rep.skip_reason = "max diameter exceeds N r L";
    return rep;
  }
  for (const auto& c : decomp.components) rep.norm = std::max(rep.norm, operator_norm(c));
  rep.checked = true;
  rep.holds = rep.norm <= rep.bound + 1e-9;
  return rep;
}

TailReport diameter_tail_experiment(const DisorderVariant& variant, int n, double epsilon,
                                    int num_samples, std::uint64_t base_seed,
                                    std::optional<TailScale> scale, bool compute_norms) {
  validate_variant(variant, n);
  if (num_samples < 1) throw InvalidArgument("tail experiment needs at least one sample");
  TailReport rep;
  TailScale used;
  if (scale) {
    used = *scale;
    std::string reason;
    if (variant.tag != VariantTag::REM) {
      const auto s = schedule_unchecked(variant.p, epsilon, &reason);
      rep.schedule_status = reason.empty() ? "admissible" : reason;
      if (reason.empty() && s.r_p == used.r && s.L_p == used.L) {
        rep.theory_bound = std::exp(-n * s.c_p);
      }
    } else {
      rep.schedule_status = "not applicable";
    }
  } else {
    const auto s = schedule(variant.p, epsilon);
    used = {s.r_p, s.L_p};
    rep.schedule_status = "admissible";
    rep.theory_bound = std::exp(-n * s.c_p);
  }
  if (!(used.r > 0.0 && used.r < 1.0) || used.L < 1) {
    throw InvalidArgument("tail experiment needs r in (0, 1) and L >= 1");
  }

  rep.rows.resize(static_cast<std::size_t>(num_samples));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < num_samples; ++k) {
    try {
      const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(k);
      const auto real = sample(variant, n, seed);
      const auto holes = deep_holes(real, epsilon);
      const auto plus = augment(holes);
      const auto decomp = connected_components(plus, used.r);
      CensusRow& row = rep.rows[static_cast<std::size_t>(k)];
      row.seed = seed;
      row.epsilon = epsilon;
      row.r = used.r;
      row.L = used.L;
      row.num_components = decomp.components.size();
      row.max_diameter = decomp.max_diameter();
      row.max_component_size = decomp.max_size();
      row.bound_2n_sqrt_rl = 2.0 * n * std::sqrt(used.r * used.L);
      row.event = row.max_diameter > n * used.r * used.L;
      if (compute_norms) {
        const auto nb = norm_bound_check(decomp, used.r, used.L);
        if (nb.checked) {
          row.t_norm = nb.norm;
          row.norm_status = nb.holds ? "holds" : "violated";
        } else {
          for (const auto& c : decomp.components) row.t_norm = std::max(row.t_norm, operator_norm(c));
          row.norm_status = "skipped: " + nb.skip_reason;
        }
      } else {
        row.t_norm = std::nan("");
        row.norm_status = "not computed";
      }
    } catch (...) {
#pragma omp critical(qrem_tail_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::size_t events = 0;
  for (const auto& row : rep.rows) events += row.event ? 1 : 0;
  rep.frequency = static_cast<double>(events) / num_samples;
  rep.binomial_stderr = std::sqrt(rep.frequency * (1.0 - rep.frequency) / num_samples);
  return rep;
}

}  // namespace qrem
