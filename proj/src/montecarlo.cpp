#include "longbranch/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "longbranch/permutations.hpp"

namespace longbranch {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

int clamp_workers(int workers, uint64_t replicates) {
  if (workers < 1) workers = 1;
  const uint64_t cap = std::max<uint64_t>(1, replicates);
  return static_cast<int>(std::min<uint64_t>(static_cast<uint64_t>(workers), cap));
}

/// Runs fn(r) for r in [0, replicates) over `workers` threads with static
/// range partitioning. fn must only touch per-replicate state.
template <typename Fn>
void parallel_replicates(uint64_t replicates, int workers, const Fn& fn) {
  workers = clamp_workers(workers, replicates);
  if (workers == 1) {
    for (uint64_t r = 0; r < replicates; ++r) fn(r);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(workers));
  const uint64_t chunk = (replicates + static_cast<uint64_t>(workers) - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const uint64_t lo = chunk * static_cast<uint64_t>(w);
    const uint64_t hi = std::min(replicates, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &fn] {
      for (uint64_t r = lo; r < hi; ++r) fn(r);
    });
  }
  for (auto& t : threads) t.join();
}

MeanStandardError summarize(const std::vector<double>& values) {
  MeanStandardError out;
  out.observations = values.size();
  if (values.empty()) return out;
  double sum = 0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - mean) * (v - mean);
  out.mean = mean;
  if (values.size() > 1) {
    const double variance = sq / static_cast<double>(values.size() - 1);
    out.std_error = std::sqrt(variance / static_cast<double>(values.size()));
  }
  return out;
}

}  // namespace

std::vector<EmpiricalDistribution> simulate(int n, int k_max, uint64_t replicates,
                                            uint64_t seed, int workers) {
  require(n >= 2, "simulate: n must be >= 2");
  require(k_max >= 1, "simulate: k_max must be >= 1");
  require(k_max <= ceil_half(n), "simulate: k_max exceeds ceil(n/2)");
  require(replicates >= 1, "simulate: replicates must be >= 1");

  workers = clamp_workers(workers, replicates);
  // one count matrix per worker, merged afterwards; merging is integer
  // addition, so the split cannot affect the result
  std::vector<std::vector<std::vector<uint64_t>>> local(
      static_cast<size_t>(workers),
      std::vector<std::vector<uint64_t>>(static_cast<size_t>(k_max),
                                         std::vector<uint64_t>(static_cast<size_t>(n), 0)));

  const uint64_t chunk = (replicates + static_cast<uint64_t>(workers) - 1) / workers;
  auto run_range = [&](int w, uint64_t lo, uint64_t hi) {
    auto& counts = local[static_cast<size_t>(w)];
    for (uint64_t r = lo; r < hi; ++r) {
      Rng rng(child_seed(seed, r));
      const OrderedHistory t = sample_uniform(n, rng);
      const BranchLengthProfile profile = external_branch_profile(t);
      const int limit = std::min<int>(k_max, static_cast<int>(profile.lengths.size()));
      for (int k = 1; k <= limit; ++k)
        ++counts[static_cast<size_t>(k - 1)][static_cast<size_t>(profile.lengths[static_cast<size_t>(k - 1)])];
    }
  };
  if (workers == 1) {
    run_range(0, 0, replicates);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      const uint64_t lo = chunk * static_cast<uint64_t>(w);
      const uint64_t hi = std::min(replicates, lo + chunk);
      if (lo >= hi) break;
      threads.emplace_back(run_range, w, lo, hi);
    }
    for (auto& t : threads) t.join();
  }

  std::vector<EmpiricalDistribution> result;
  result.reserve(static_cast<size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    EmpiricalDistribution emp;
    emp.n = n;
    emp.k = k;
    emp.replicates = replicates;
    emp.seed = seed;
    for (int w = 0; w < workers; ++w) {
      const auto& row = local[static_cast<size_t>(w)][static_cast<size_t>(k - 1)];
      for (int s = 1; s < n; ++s)
        if (row[static_cast<size_t>(s)] > 0) emp.counts[s] += row[static_cast<size_t>(s)];
    }
    result.push_back(std::move(emp));
  }
  return result;
}

GofReport gof_compare(const EmpiricalDistribution& emp, const DistributionTable& exact,
                      double pool_threshold) {
  require(emp.n == exact.n && emp.k == exact.k, "gof_compare: (n, k) mismatch");
  require(emp.replicates >= 1, "gof_compare: empty empirical distribution");
  const double total = static_cast<double>(emp.replicates);

  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  if (!emp.counts.empty()) {
    lo = std::min(lo, emp.counts.begin()->first);
    hi = std::max(hi, emp.counts.rbegin()->first);
  }
  if (!exact.entries.empty()) {
    lo = std::min(lo, exact.entries.front().first);
    hi = std::max(hi, exact.entries.back().first);
  }

  GofReport report;
  double ecdf = 0, cdf = 0, tv = 0;
  for (int s = lo; s <= hi; ++s) {
    const auto it = emp.counts.find(s);
    const double freq = it == emp.counts.end() ? 0.0 : static_cast<double>(it->second) / total;
    const double p = to_double(exact.prob(s));
    tv += std::abs(freq - p);
    ecdf += freq;
    cdf += p;
    report.ks = std::max(report.ks, std::abs(ecdf - cdf));
  }
  report.tv = tv / 2.0;

  // chi-square over the exact support; observations outside it belong to a
  // zero-expectation cell and force an infinite statistic
  double observed_inside = 0;
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double cell_obs = 0, cell_exp = 0;
  for (const auto& [s, p] : exact.entries) {
    const auto it = emp.counts.find(s);
    const double obs = it == emp.counts.end() ? 0.0 : static_cast<double>(it->second);
    observed_inside += obs;
    cell_obs += obs;
    cell_exp += to_double(p) * total;
    if (cell_exp >= pool_threshold) {
      cells.emplace_back(cell_obs, cell_exp);
      cell_obs = cell_exp = 0;
    }
  }
  if (cell_exp > 0) {
    if (cells.empty()) {
      cells.emplace_back(cell_obs, cell_exp);
    } else {
      cells.back().first += cell_obs;
      cells.back().second += cell_exp;
    }
  }
  double chi = 0;
  for (const auto& [obs, expected] : cells) {
    const double d = obs - expected;
    chi += d * d / expected;
  }
  if (observed_inside < total) chi = std::numeric_limits<double>::infinity();
  report.chi_square = chi;
  report.chi_square_dof = static_cast<int>(cells.size()) - 1;
  return report;
}

CoalescentSample sample_coalescent(int n, Rng& rng) {
  require(n >= 2, "sample_coalescent: n must be >= 2");
  CoalescentSample sample;
  sample.tree = sample_uniform(n, rng);
  sample.layer_times.reserve(static_cast<size_t>(n - 1));
  for (int i = 2; i <= n; ++i) {
    const double rate = static_cast<double>(i) * (i - 1) / 2.0;
    sample.layer_times.push_back(rng.exponential(rate));
  }
  return sample;
}

CoalescentSample sample_coalescent(int n, uint64_t seed) {
  Rng rng(seed);
  return sample_coalescent(n, rng);
}

namespace {

/// Time spanned by an external branch of discrete length s: the last s
/// layer times (layers n+1-s .. n).
double external_branch_time(const std::vector<double>& layer_times, int s) {
  double time = 0;
  const size_t count = layer_times.size();
  for (size_t i = count - static_cast<size_t>(s); i < count; ++i) time += layer_times[i];
  return time;
}

}  // namespace

MeanStandardError kth_time_length_stats(int n, int k, uint64_t replicates, uint64_t seed,
                                        int workers) {
  require(n >= 2, "kth_time_length_stats: n must be >= 2");
  require(k >= 1 && k <= ceil_half(n), "kth_time_length_stats: k exceeds ceil(n/2)");
  require(replicates >= 1, "kth_time_length_stats: replicates must be >= 1");

  // per-replicate slots keep the reduction order fixed for any worker count
  std::vector<double> values(static_cast<size_t>(replicates));
  parallel_replicates(replicates, workers, [&](uint64_t r) {
    Rng rng(child_seed(seed, r));
    const CoalescentSample sample = sample_coalescent(n, rng);
    const BranchLengthProfile profile = external_branch_profile(sample.tree);
    const int lk = profile.lengths[static_cast<size_t>(k - 1)];
    values[static_cast<size_t>(r)] = external_branch_time(sample.layer_times, lk);
  });
  return summarize(values);
}

MeanStandardError external_time_stats(int n, int s, uint64_t replicates, uint64_t seed,
                                      int workers) {
  require(n >= 2, "external_time_stats: n must be >= 2");
  require(s >= 1 && s <= n - 1, "external_time_stats: requires 1 <= s <= n-1");
  require(replicates >= 1, "external_time_stats: replicates must be >= 1");

  constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> slots(static_cast<size_t>(replicates), kAbsent);
  parallel_replicates(replicates, workers, [&](uint64_t r) {
    Rng rng(child_seed(seed, r));
    const CoalescentSample sample = sample_coalescent(n, rng);
    const auto& node = sample.tree.node(s);
    if (node.left != 0 && node.right != 0) return;  // no external branch of length s
    slots[static_cast<size_t>(r)] = external_branch_time(sample.layer_times, s);
  });
  std::vector<double> values;
  values.reserve(slots.size());
  for (double v : slots)
    if (!std::isnan(v)) values.push_back(v);
  return summarize(values);
}

}  // namespace longbranch
