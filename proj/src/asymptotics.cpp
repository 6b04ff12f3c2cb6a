#include "longbranch/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace longbranch {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double rescale(int n, int s) { return (n - s) / std::sqrt(n / 2.0); }

long rescaled_threshold(int n, double x) {
  return static_cast<long>(std::ceil(static_cast<double>(n) - x * std::sqrt(n / 2.0)));
}

double chi_cdf_even(int k, double x) {
  require(k >= 1, "chi_cdf_even: k must be >= 1");
  require(x >= 0, "chi_cdf_even: x must be >= 0");
  const double t = x * x / 2.0;
  if (t > 700.0) return 1.0;  // tail below double resolution for any sane k
  double term = std::exp(-t);
  double sum = term;
  for (int j = 1; j < k; ++j) {
    term *= t / j;
    sum += term;
  }
  return 1.0 - sum;
}

double chi_pdf_even(int k, double x) {
  require(k >= 1, "chi_pdf_even: k must be >= 1");
  require(x >= 0, "chi_pdf_even: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double log_pdf = (2 * k - 1) * std::log(x) - x * x / 2.0 - (k - 1) * M_LN2 - std::lgamma(k);
  return std::exp(log_pdf);
}

double chi_moment(int k, int m) {
  require(k >= 1, "chi_moment: k must be >= 1");
  require(m >= 0, "chi_moment: m must be >= 0");
  return std::exp(m * 0.5 * M_LN2 + std::lgamma(m / 2.0 + k) - std::lgamma(k));
}

std::optional<double> local_pmf_approx(int n, int k, int s) {
  require(n >= 2, "local_pmf_approx: n must be >= 2");
  require(k >= 1, "local_pmf_approx: k must be >= 1");
  require(s <= n, "local_pmf_approx: s must be <= n");
  const double x = rescale(n, s);
  if (x > std::pow(static_cast<double>(n), 1.0 / 7.0)) return std::nullopt;
  return chi_pdf_even(k, x) / std::sqrt(n / 2.0);
}

double asymptotic_mean(int n, int k, bool crude) {
  require(k >= 1, "asymptotic_mean: k must be >= 1");
  require(n >= 1, "asymptotic_mean: n must be >= 1");
  if (crude) return n - std::sqrt(static_cast<double>(k) * n);
  const double central = mpz_get_d(binomial(2 * k, k).get_mpz_t());
  const double coefficient = std::sqrt(2.0 * M_PI) * k * central / std::pow(4.0, k);
  return n - std::sqrt(n / 2.0) * coefficient;
}

double asymptotic_var(int n, int k) {
  require(k >= 1, "asymptotic_var: k must be >= 1");
  const double central = mpz_get_d(binomial(2 * k, k).get_mpz_t());
  const double coefficient = k - M_PI * k * k / std::pow(16.0, k) * central * central;
  return coefficient * n;
}

double expected_external_time(int n, int s) {
  require(n >= 2, "expected_external_time: n must be >= 2");
  require(s >= 1 && s <= n - 1, "expected_external_time: requires 1 <= s <= n-1");
  return 2.0 / (n - s) - 2.0 / n;
}

double asymptotic_kth_time_mean(int n, int k) {
  require(k >= 1, "asymptotic_kth_time_mean: k must be >= 1");
  require(n >= 1, "asymptotic_kth_time_mean: n must be >= 1");
  return 2.0 / std::sqrt(static_cast<double>(k) * n);
}

double exact_rescaled_cdf(const DistributionTable& table, double x) {
  const long threshold = rescaled_threshold(table.n, x);
  Rational tail(0);
  for (const auto& [s, p] : table.entries)
    if (s >= threshold) tail += p;
  return to_double(tail);
}

double exact_rescaled_moment(const DistributionTable& table, int m) {
  require(m >= 0, "exact_rescaled_moment: m must be >= 0");
  Rational acc(0);
  for (const auto& [s, p] : table.entries) {
    BigInt gap_power;
    mpz_pow_ui(gap_power.get_mpz_t(), BigInt(table.n - s).get_mpz_t(),
               static_cast<unsigned long>(m));
    acc += p * gap_power;
  }
  return to_double(acc) / std::pow(table.n / 2.0, m / 2.0);
}

std::vector<Fig3Row> fig3_rows(int n, int k_max, double x_max, double step) {
  require(n >= 2 * k_max + 1, "fig3_rows: n too small for the requested k range");
  require(k_max >= 1 && step > 0 && x_max >= 0, "fig3_rows: bad grid");
  std::vector<Fig3Row> rows;
  const int points = static_cast<int>(std::floor(x_max / step + 0.5)) + 1;
  for (int k = 1; k <= k_max; ++k) {
    const DistributionTable table = distribution_table(n, k);
    // suffix sums once per table, then one lookup per grid point
    std::vector<Rational> suffix(table.entries.size() + 1, Rational(0));
    for (size_t i = table.entries.size(); i-- > 0;)
      suffix[i] = suffix[i + 1] + table.entries[i].second;
    for (int i = 0; i < points; ++i) {
      const double x = i * step;
      const long threshold = rescaled_threshold(n, x);
      const auto it = std::lower_bound(
          table.entries.begin(), table.entries.end(), threshold,
          [](const auto& e, long v) { return e.first < v; });
      const double exact = to_double(suffix[static_cast<size_t>(it - table.entries.begin())]);
      rows.push_back({k, x, exact, chi_cdf_even(k, x)});
    }
  }
  return rows;
}

}  // namespace longbranch
