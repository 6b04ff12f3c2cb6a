#pragma once

#include <optional>
#include <vector>

#include "longbranch/exact_dist.hpp"

namespace longbranch {

/// (n - s) / sqrt(n/2), the rescaling under which l_k converges to the
/// chi distribution with 2k degrees of freedom.
double rescale(int n, int s);

/// Smallest s with (n - s)/sqrt(n/2) <= x, i.e. ceil(n - x*sqrt(n/2)).
long rescaled_threshold(int n, double x);

/// cdf of chi(2k) in its even-dof closed form
/// 1 - e^(-x^2/2) * sum_{j<k} (x^2/2)^j / j!.
double chi_cdf_even(int k, double x);

/// Density x^(2k-1) e^(-x^2/2) / (2^(k-1)(k-1)!).
double chi_pdf_even(int k, double x);

/// m-th raw moment 2^(m/2) Gamma(m/2 + k) / Gamma(k).
double chi_moment(int k, int m);

/// Local approximation of P(l_k = s): the chi(2k) density at the rescaled
/// point divided by sqrt(n/2). Empty when the rescaled point exceeds
/// n^(1/7), where the expansion carries no uniform guarantee.
std::optional<double> local_pmf_approx(int n, int k, int s);

/// n - sqrt(n/2) * sqrt(2*pi) * k * C(2k,k) / 4^k; with `crude` the
/// n - sqrt(k*n) variant.
double asymptotic_mean(int n, int k, bool crude = false);

/// (k - pi * k^2 / 16^k * C(2k,k)^2) * n.
double asymptotic_var(int n, int k);

/// Expected coalescent time length of an external branch of discrete
/// length s: 2/(n-s) - 2/n. Requires 1 <= s <= n-1.
double expected_external_time(int n, int s);

/// 2 / sqrt(k*n), the large-n mean of the k-th time length.
double asymptotic_kth_time_mean(int n, int k);

/// P((n - l_k)/sqrt(n/2) <= x) = P(l_k >= ceil(n - x*sqrt(n/2))) from the
/// exact table.
double exact_rescaled_cdf(const DistributionTable& table, double x);

/// Exact m-th moment of the rescaled variable.
double exact_rescaled_moment(const DistributionTable& table, int m);

struct Fig3Row {
  int k = 0;
  double x = 0;
  double exact_cdf = 0;
  double chi_cdf = 0;
};

/// Exact vs limit cdf of the rescaled variable for k = 1..k_max on the
/// grid x = 0(step)x_max.
std::vector<Fig3Row> fig3_rows(int n, int k_max = 3, double x_max = 5.0, double step = 0.2);

}  // namespace longbranch
