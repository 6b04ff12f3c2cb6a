#include "longbranch/exact_dist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>

#include "longbranch/histories.hpp"
#include "longbranch/permutations.hpp"

namespace longbranch {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_zero(const Rational& q) { return sgn(q) == 0; }

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Rational DistributionTable::prob(int s) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), s,
                                   [](const auto& e, int v) { return e.first < v; });
  if (it == entries.end() || it->first != s) return Rational(0);
  return it->second;
}

Rational DistributionTable::cdf(int s) const {
  Rational acc(0);
  for (const auto& [value, p] : entries) {
    if (value > s) break;
    acc += p;
  }
  return acc;
}

Rational DistributionTable::sum() const {
  Rational acc(0);
  for (const auto& [value, p] : entries) acc += p;
  return acc;
}

int support_lower_bound(int n, int k) { return std::max(1, ceil_half(n) - k + 1); }

int support_upper_bound(int n, int k) { return n - k; }

Rational cdf_ell1(int n, int u) {
  require(n >= 2, "cdf_ell1: n must be >= 2");
  if (n == 2) return Rational(u >= 1 ? 1 : 0);
  if (u < ceil_half(n)) return Rational(0);
  if (u >= n - 1) return Rational(1);
  return make_rational(factorial(u) * factorial(u - 1),
                       factorial(2 * u - n) * factorial(n - 1));
}

Rational pmf_ell1(int n, int s) {
  require(n >= 2, "pmf_ell1: n must be >= 2");
  if (n == 2) return Rational(s == 1 ? 1 : 0);
  if (s < ceil_half(n) || s > n - 1) return Rational(0);
  const BigInt big_n(n), big_s(s);
  const BigInt poly = 4 * big_n * big_s + big_s - big_n * big_n - big_n - 3 * big_s * big_s;
  return make_rational(factorial(s - 1) * factorial(s - 2) * poly,
                       factorial(2 * s - n) * factorial(n - 1));
}

namespace {

Rational joint_pmf_impl(int n, std::span<const int> s) {
  if (s.size() == 1) {
    require(n >= 2, "joint_pmf: recursion reached size < 2");
    return pmf_ell1(n, s.front());
  }
  require(n >= 3, "joint_pmf: recursion reached size < 3 with lengths remaining");
  const int s1 = s.front();
  if (s1 > n - 1) return Rational(0);
  const auto tail = s.subspan(1);
  const long gap = n - s1;  // >= 1
  Rational result = make_rational(BigInt(2 * gap), BigInt(n - 1)) * joint_pmf_impl(n - 1, tail);
  if (gap >= 2)
    result += make_rational(BigInt(gap) * (gap - 1), BigInt(n - 1) * BigInt(n - 2)) *
              joint_pmf_impl(n - 2, tail);
  return result;
}

}  // namespace

Rational joint_pmf(int n, const std::vector<int>& s) {
  require(!s.empty(), "joint_pmf: length prefix must be non-empty");
  require(s.back() >= 1, "joint_pmf: lengths must be positive");
  for (size_t i = 0; i + 1 < s.size(); ++i)
    require(s[i] > s[i + 1], "joint_pmf: lengths must be strictly decreasing");
  return joint_pmf_impl(n, std::span<const int>(s));
}

namespace {

// Exhaustive per-size tallies; counts[j][s] = permutations of size n-1 whose
// profile has j+1 or more entries with the (j+1)-th equal to s.
struct BruteforceCounts {
  std::vector<std::vector<uint64_t>> counts;
};

const BruteforceCounts& bruteforce_counts(int n) {
  static std::map<int, BruteforceCounts> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  const auto found = cache.find(n);
  if (found != cache.end()) return found->second;

  BruteforceCounts result;
  const int m = n - 1;
  result.counts.assign(static_cast<size_t>(m),
                       std::vector<uint64_t>(static_cast<size_t>(n), 0));
  std::vector<int> values(static_cast<size_t>(m));
  std::iota(values.begin(), values.end(), 1);
  std::vector<int> profile;
  profile.reserve(static_cast<size_t>(m));
  do {
    profile.clear();
    for (int i = 0; i < m; ++i) {
      const bool interior = i > 0 && i < m - 1;
      const bool peak = interior && values[static_cast<size_t>(i - 1)] < values[static_cast<size_t>(i)] &&
                        values[static_cast<size_t>(i)] > values[static_cast<size_t>(i + 1)];
      if (!peak) profile.push_back(values[static_cast<size_t>(i)]);
    }
    std::sort(profile.begin(), profile.end(), std::greater<>());
    for (size_t j = 0; j < profile.size(); ++j)
      ++result.counts[j][static_cast<size_t>(profile[j])];
  } while (std::next_permutation(values.begin(), values.end()));
  return cache.emplace(n, std::move(result)).first->second;
}

Rational bruteforce_prob(int n, int k, int s, int bound) {
  require(n <= bound, "pmf: n too small for the analytic path and above the enumeration bound");
  if (s < 1 || s >= n) return Rational(0);
  const auto& tallies = bruteforce_counts(n).counts;
  if (k > static_cast<int>(tallies.size())) return Rational(0);
  const uint64_t count = tallies[static_cast<size_t>(k - 1)][static_cast<size_t>(s)];
  return make_rational(BigInt(static_cast<unsigned long>(count)), factorial(n - 1));
}

// Numerator of the per-letter factor; `offset` is the count of quadratic
// letters seen so far, which shifts the argument.
BigInt factor_numerator(bool quadratic, long offset, long u) {
  const long shifted = u - offset;
  if (quadratic) return BigInt(shifted) * (shifted - 1);
  return BigInt(2 * shifted);
}

}  // namespace

Rational pmf_ellk(int n, int k, int s) {
  require(k >= 1, "pmf_ellk: k must be >= 1");
  require(n >= 2, "pmf_ellk: n must be >= 2");
  if (k == 1) return pmf_ell1(n, s);
  if (n < 2 * k + 1) return bruteforce_prob(n, k, s, enumeration_bound());
  if (s < 1 || s > n - k) return Rational(0);

  const long cap = n - k + 1 - s;  // summation limit s_k^*; >= 1 here
  const int letters = k - 1;
  std::vector<std::optional<Rational>> bottom(static_cast<size_t>(k));
  std::vector<BigInt> level(static_cast<size_t>(cap) + 1);
  std::vector<BigInt> suffix(static_cast<size_t>(cap) + 2);
  std::vector<long> quad_before(static_cast<size_t>(letters));
  Rational total(0);

  for (unsigned word = 0; word < (1u << letters); ++word) {
    const int quad_total = std::popcount(word);
    auto& base = bottom[static_cast<size_t>(quad_total)];
    if (!base) base = pmf_ell1(n - quad_total - k + 1, s);
    if (is_zero(*base)) continue;

    BigInt den(1);
    {
      long seen = 0;
      for (int l = 0; l < letters; ++l) {
        quad_before[static_cast<size_t>(l)] = seen;
        const long size = n - seen - l;
        den *= size - 1;
        if (word >> l & 1u) {
          den *= size - 2;
          ++seen;
        }
      }
    }

    // Innermost letter first, then one suffix-accumulation pass per letter.
    const bool inner_quad = (word >> (letters - 1)) & 1u;
    for (long u = 1; u <= cap; ++u)
      level[static_cast<size_t>(u)] =
          factor_numerator(inner_quad, quad_before[static_cast<size_t>(letters - 1)], u);
    for (int l = letters - 2; l >= 0; --l) {
      suffix[static_cast<size_t>(cap) + 1] = 0;
      for (long u = cap; u >= 1; --u)
        suffix[static_cast<size_t>(u)] = suffix[static_cast<size_t>(u) + 1] + level[static_cast<size_t>(u)];
      const bool quad = (word >> l) & 1u;
      for (long u = 1; u <= cap; ++u)
        level[static_cast<size_t>(u)] =
            factor_numerator(quad, quad_before[static_cast<size_t>(l)], u) * suffix[static_cast<size_t>(u)];
    }
    BigInt numerator(0);
    for (long u = 1; u <= cap; ++u) numerator += level[static_cast<size_t>(u)];
    if (sgn(numerator) == 0) continue;
    total += make_rational(std::move(numerator), std::move(den)) * *base;
  }
  return total;
}

Rational pmf_ell2_closed(int n, int s) {
  require(n >= 5, "pmf_ell2_closed: requires n >= 5");
  require(s >= ceil_half(n) - 1 && s <= n - 2, "pmf_ell2_closed: s out of range");
  BigInt linear(0), quadratic(0);
  for (int s1 = s + 1; s1 <= n - 1; ++s1) {
    const long gap = n - s1;
    linear += gap;
    quadratic += BigInt(gap) * (gap - 1);
  }
  return pmf_ell1(n - 1, s) * make_rational(2 * linear, BigInt(n - 1)) +
         pmf_ell1(n - 2, s) * make_rational(quadratic, BigInt(n - 1) * (n - 2));
}

Rational pmf_ell3_closed(int n, int s) {
  require(n >= 7, "pmf_ell3_closed: requires n >= 7");
  require(s >= ceil_half(n) - 2 && s <= n - 3, "pmf_ell3_closed: s out of range");
  BigInt first(0), second(0), third(0);
  for (int s1 = s + 2; s1 <= n - 1; ++s1) {
    for (int s2 = s + 1; s2 <= s1 - 1; ++s2) {
      const BigInt a(n - s1);
      first += a * (n - 1 - s2);
      second += a * (n - s2 - 2) * (2 * n - 2 - s2 - s1);
      third += a * (n - s1 - 1) * (n - 2 - s2) * (n - s2 - 3);
    }
  }
  const BigInt d2 = BigInt(n - 1) * (n - 2);
  const BigInt d3 = d2 * (n - 3);
  const BigInt d4 = d3 * (n - 4);
  return pmf_ell1(n - 2, s) * make_rational(4 * first, d2) +
         pmf_ell1(n - 3, s) * make_rational(2 * second, d3) +
         pmf_ell1(n - 4, s) * make_rational(third, d4);
}

DistributionTable distribution_table(int n, int k) {
  require(n >= 2, "distribution_table: n must be >= 2");
  require(k >= 1, "distribution_table: k must be >= 1");
  require(k <= ceil_half(n), "distribution_table: k exceeds ceil(n/2)");
  if (n < 2 * k + 1 && n != 2) return bruteforce_table(n, k);
  DistributionTable table{n, k, {}};
  if (n == 2) {
    table.entries.emplace_back(1, Rational(1));
    return table;
  }
  ensure_factorials(n);
  for (int s = support_lower_bound(n, k); s <= support_upper_bound(n, k); ++s) {
    Rational p = pmf_ellk(n, k, s);
    if (!is_zero(p)) table.entries.emplace_back(s, std::move(p));
  }
  return table;
}

std::pair<Rational, Rational> exact_mean_var(int n, int k) {
  const DistributionTable table = distribution_table(n, k);
  Rational mean(0), second_moment(0);
  for (const auto& [s, p] : table.entries) {
    mean += p * s;
    second_moment += p * (BigInt(s) * s);
  }
  return {mean, second_moment - mean * mean};
}

DistributionTable bruteforce_table(int n, int k) {
  return bruteforce_table(n, k, enumeration_bound());
}

DistributionTable bruteforce_table(int n, int k, int bound) {
  require(n >= 2, "bruteforce_table: n must be >= 2");
  require(k >= 1, "bruteforce_table: k must be >= 1");
  require(n <= bound, "bruteforce_table: n exceeds the enumeration bound");
  DistributionTable table{n, k, {}};
  const auto& tallies = bruteforce_counts(n).counts;
  if (k > static_cast<int>(tallies.size())) return table;
  const auto& row = tallies[static_cast<size_t>(k - 1)];
  for (int s = 1; s < n; ++s) {
    const uint64_t count = row[static_cast<size_t>(s)];
    if (count == 0) continue;
    table.entries.emplace_back(
        s, make_rational(BigInt(static_cast<unsigned long>(count)), factorial(n - 1)));
  }
  return table;
}

namespace {

// log P(l_1 = s) through long-double lgamma.
long double log_pmf_ell1_ld(int n, int s) {
  if (n == 2) return s == 1 ? 0.0L : static_cast<long double>(kNegInf);
  if (s < ceil_half(n) || s > n - 1) return static_cast<long double>(kNegInf);
  const long long N = n, S = s;
  const long long poly = 4 * N * S + S - N * N - N - 3 * S * S;
  if (poly <= 0) return static_cast<long double>(kNegInf);
  return lgammal(static_cast<long double>(s)) + lgammal(static_cast<long double>(s - 1)) +
         logl(static_cast<long double>(poly)) - lgammal(static_cast<long double>(2 * s - n + 1)) -
         lgammal(static_cast<long double>(n));
}

long double factor_value(bool quadratic, long offset, long u) {
  const auto shifted = static_cast<long double>(u - offset);
  return quadratic ? shifted * (shifted - 1) : 2 * shifted;
}

}  // namespace

double log_pmf_ellk_float(int n, int k, int s) {
  require(k >= 1, "log_pmf_ellk_float: k must be >= 1");
  require(n >= 2 * k + 1, "log_pmf_ellk_float: requires n >= 2k+1");
  if (k == 1) return static_cast<double>(log_pmf_ell1_ld(n, s));
  if (s < 1 || s > n - k) return kNegInf;

  const long cap = n - k + 1 - s;
  const int letters = k - 1;
  std::vector<long double> level(static_cast<size_t>(cap) + 1);
  std::vector<long double> suffix(static_cast<size_t>(cap) + 2);
  std::vector<long> quad_before(static_cast<size_t>(letters));
  std::vector<long double> word_weight;  // nested sum / denominator
  std::vector<long double> word_logbase;
  word_weight.reserve(1u << letters);
  word_logbase.reserve(1u << letters);
  long double max_logbase = static_cast<long double>(kNegInf);

  for (unsigned word = 0; word < (1u << letters); ++word) {
    const int quad_total = std::popcount(word);
    const long double logbase = log_pmf_ell1_ld(n - quad_total - k + 1, s);
    if (logbase == static_cast<long double>(kNegInf)) continue;

    long double den = 1.0L;
    {
      long seen = 0;
      for (int l = 0; l < letters; ++l) {
        quad_before[static_cast<size_t>(l)] = seen;
        const long size = n - seen - l;
        den *= static_cast<long double>(size - 1);
        if (word >> l & 1u) {
          den *= static_cast<long double>(size - 2);
          ++seen;
        }
      }
    }

    const bool inner_quad = (word >> (letters - 1)) & 1u;
    for (long u = 1; u <= cap; ++u)
      level[static_cast<size_t>(u)] =
          factor_value(inner_quad, quad_before[static_cast<size_t>(letters - 1)], u);
    for (int l = letters - 2; l >= 0; --l) {
      suffix[static_cast<size_t>(cap) + 1] = 0.0L;
      for (long u = cap; u >= 1; --u)
        suffix[static_cast<size_t>(u)] = suffix[static_cast<size_t>(u) + 1] + level[static_cast<size_t>(u)];
      const bool quad = (word >> l) & 1u;
      for (long u = 1; u <= cap; ++u)
        level[static_cast<size_t>(u)] =
            factor_value(quad, quad_before[static_cast<size_t>(l)], u) * suffix[static_cast<size_t>(u)];
    }
    long double numerator = 0.0L;
    for (long u = 1; u <= cap; ++u) numerator += level[static_cast<size_t>(u)];
    if (numerator == 0.0L) continue;
    word_weight.push_back(numerator / den);
    word_logbase.push_back(logbase);
    max_logbase = std::max(max_logbase, logbase);
  }

  if (word_weight.empty()) return kNegInf;
  long double acc = 0.0L;
  for (size_t i = 0; i < word_weight.size(); ++i)
    acc += word_weight[i] * expl(word_logbase[i] - max_logbase);
  if (acc <= 0.0L) return kNegInf;
  return static_cast<double>(logl(acc) + max_logbase);
}

FloatDistributionTable float_distribution_table(int n, int k) {
  require(n >= 2, "float_distribution_table: n must be >= 2");
  require(k >= 1, "float_distribution_table: k must be >= 1");
  require(k <= ceil_half(n), "float_distribution_table: k exceeds ceil(n/2)");
  FloatDistributionTable table{n, k, {}};
  if (n < 2 * k + 1) {
    for (const auto& [s, p] : distribution_table(n, k).entries)
      table.entries.emplace_back(s, to_double(p));
    return table;
  }
  for (int s = support_lower_bound(n, k); s <= support_upper_bound(n, k); ++s) {
    const double lp = log_pmf_ellk_float(n, k, s);
    if (lp == kNegInf) continue;
    table.entries.emplace_back(s, std::exp(lp));
  }
  return table;
}

double log_of_rational(const Rational& q) {
  if (sgn(q) <= 0) throw std::invalid_argument("log_of_rational: non-positive value");
  long num_exp = 0, den_exp = 0;
  const double num = mpz_get_d_2exp(&num_exp, q.get_num().get_mpz_t());
  const double den = mpz_get_d_2exp(&den_exp, q.get_den().get_mpz_t());
  return std::log(num) - std::log(den) + M_LN2 * static_cast<double>(num_exp - den_exp);
}

std::vector<OracleMismatch> oracle_mismatches(int max_n) {
  return oracle_mismatches(max_n, [](int n, int k, int s) { return pmf_ellk(n, k, s); });
}

std::vector<OracleMismatch> oracle_mismatches(
    int max_n, const std::function<Rational(int, int, int)>& pmf) {
  require(max_n >= 3, "oracle_mismatches: max_n must be >= 3");
  require(max_n <= 10, "oracle_mismatches: max_n must be <= 10");
  std::vector<OracleMismatch> mismatches;
  for (int n = 3; n <= max_n; ++n) {
    for (int k = 1; k <= ceil_half(n); ++k) {
      const DistributionTable oracle = bruteforce_table(n, k, max_n);
      for (int s = 1; s <= n; ++s) {
        const Rational expected = oracle.prob(s);
        const Rational got = pmf(n, k, s);
        if (expected != got) mismatches.push_back({n, k, s, expected, got});
      }
    }
  }
  return mismatches;
}

}  // namespace longbranch
