#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "longbranch/rational.hpp"

namespace longbranch {

/// Exact pmf of the k-th largest external branch length at fixed n,
/// restricted to its support (entries carry probability > 0, ascending s).
struct DistributionTable {
  int n = 0;
  int k = 0;
  std::vector<std::pair<int, Rational>> entries;

  /// Probability of l_k == s (0 when s is outside the support).
  Rational prob(int s) const;
  /// P(l_k <= s).
  Rational cdf(int s) const;
  Rational sum() const;
};

/// Same table evaluated through the log-gamma float backend.
struct FloatDistributionTable {
  int n = 0;
  int k = 0;
  std::vector<std::pair<int, double>> entries;
};

/// l_k <= n-k, and at least ceil(n/2)-k+1 by the peak-count bound.
int support_lower_bound(int n, int k);
int support_upper_bound(int n, int k);

/// P(l_1 <= u): u!(u-1)! / ((2u-n)!(n-1)!) on ceil(n/2) <= u <= n-1,
/// clamped to 0 below and 1 above.
Rational cdf_ell1(int n, int u);

/// P(l_1 = s): (s-1)!(s-2)!(4ns+s-n^2-n-3s^2) / ((2s-n)!(n-1)!) on the
/// support, 0 elsewhere. n = 2 is the point mass at 1.
Rational pmf_ell1(int n, int s);

/// Joint probability of (l_1, ..., l_k) = s via the two-term size
/// recurrence, bottoming out at pmf_ell1. s must be strictly decreasing.
Rational joint_pmf(int n, const std::vector<int>& s);

/// P(l_k = s). For n >= 2k+1 this marginalizes the joint law with the
/// word-expansion sum: per word the (k-1)-fold nested sum collapses to
/// k-1 suffix-accumulation passes over 1..n-k+1-s. Smaller n fall back to
/// the exhaustive table.
Rational pmf_ellk(int n, int k, int s);

/// Closed k = 2 form: two weighted sums of pmf_ell1 at sizes n-1, n-2.
/// Valid for n >= 5 and ceil(n/2)-1 <= s <= n-2 (throws outside).
Rational pmf_ell2_closed(int n, int s);

/// Closed k = 3 form: three double sums weighting pmf_ell1 at sizes
/// n-2, n-3, n-4. Valid for n >= 7 and ceil(n/2)-2 <= s <= n-3.
Rational pmf_ell3_closed(int n, int s);

/// Full exact table of l_k; requires k <= ceil(n/2) so that l_k always
/// exists and the entries sum to exactly 1.
DistributionTable distribution_table(int n, int k);

/// Exact (mean, variance) of l_k.
std::pair<Rational, Rational> exact_mean_var(int n, int k);

/// Ground-truth table from enumerating all (n-1)! permutations and
/// tallying the k-th largest non-peak entry. Counts are cached per n.
DistributionTable bruteforce_table(int n, int k);
DistributionTable bruteforce_table(int n, int k, int bound);

/// Natural log of P(l_k = s) through long-double log-gamma arithmetic;
/// -infinity outside the support. Requires n >= 2k+1.
double log_pmf_ellk_float(int n, int k, int s);

FloatDistributionTable float_distribution_table(int n, int k);

/// log of a positive rational, accurate to ~1e-12, usable far beyond
/// double range.
double log_of_rational(const Rational& q);

struct OracleMismatch {
  int n = 0, k = 0, s = 0;
  Rational expected;
  Rational got;
};

/// Compares the analytic pmf against the enumeration oracle for every
/// n in 3..max_n, k <= ceil(n/2) and s in 1..n. Empty result = pass.
/// A custom pmf can be injected to exercise the harness itself.
std::vector<OracleMismatch> oracle_mismatches(int max_n);
std::vector<OracleMismatch> oracle_mismatches(
    int max_n, const std::function<Rational(int, int, int)>& pmf);

}  // namespace longbranch
