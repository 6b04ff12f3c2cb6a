#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "longbranch/exact_dist.hpp"
#include "longbranch/histories.hpp"
#include "longbranch/rng.hpp"

namespace longbranch {

struct EmpiricalDistribution {
  int n = 0;
  int k = 0;
  uint64_t replicates = 0;
  uint64_t seed = 0;
  std::map<int, uint64_t> counts;  // s -> occurrences of l_k == s
};

/// Samples `replicates` uniform ordered histories and tallies l_k for every
/// k <= k_max. Replicate r always draws from child_seed(seed, r), so the
/// result is identical for any worker count.
std::vector<EmpiricalDistribution> simulate(int n, int k_max, uint64_t replicates,
                                            uint64_t seed, int workers = 1);

struct GofReport {
  double tv = 0;           // total variation distance
  double ks = 0;           // Kolmogorov-Smirnov distance
  double chi_square = 0;   // statistic over pooled support cells
  int chi_square_dof = 0;  // pooled cells minus one
};

/// Distances between an empirical distribution and the exact law with the
/// same (n, k). Chi-square cells are pooled until the expected count
/// reaches `pool_threshold` (trailing leftovers join the last cell).
GofReport gof_compare(const EmpiricalDistribution& emp, const DistributionTable& exact,
                      double pool_threshold = 5.0);

/// A uniform history plus independent Exponential(i choose 2) layer times;
/// layer_times[i-2] is the duration of the layer with i coexisting
/// branches, i = 2..n.
struct CoalescentSample {
  OrderedHistory tree;
  std::vector<double> layer_times;
};

CoalescentSample sample_coalescent(int n, Rng& rng);
CoalescentSample sample_coalescent(int n, uint64_t seed);

struct MeanStandardError {
  double mean = 0;
  double std_error = 0;
  uint64_t observations = 0;
};

/// Monte Carlo mean of the time length of the external branch attaining
/// l_k. A cherry attaining l_k contributes its shared time once.
MeanStandardError kth_time_length_stats(int n, int k, uint64_t replicates, uint64_t seed,
                                        int workers = 1);

/// Monte Carlo mean of the time length of external branches of discrete
/// length s. All such branches in one tree span the same layers and share
/// one time value; replicates possessing at least one contribute that
/// value once. Tree shape and layer times are independent, so the
/// conditioning does not bias the mean.
MeanStandardError external_time_stats(int n, int s, uint64_t replicates, uint64_t seed,
                                      int workers = 1);

}  // namespace longbranch
