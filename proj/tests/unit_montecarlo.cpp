#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "longbranch/asymptotics.hpp"
#include "longbranch/montecarlo.hpp"
#include "support.hpp"

using namespace longbranch;
using namespace longbranch::testing;

TEST_CASE("simulate is deterministic across runs and worker counts") {
  const auto once = simulate(10, 3, 2000, 99, 1);
  const auto again = simulate(10, 3, 2000, 99, 1);
  const auto wide = simulate(10, 3, 2000, 99, 8);
  REQUIRE(once.size() == 3);
  for (size_t i = 0; i < once.size(); ++i) {
    CHECK(once[i].counts == again[i].counts);
    CHECK(once[i].counts == wide[i].counts);
  }
  CHECK_THROWS_AS(simulate(10, 6, 10, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate(10, 1, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("a single replicate gives a single count") {
  const auto result = simulate(12, 2, 1, 5, 4);
  REQUIRE(result.size() == 2);
  for (const auto& emp : result) {
    uint64_t total = 0;
    for (const auto& [s, c] : emp.counts) total += c;
    CHECK(total == 1);
  }
}

TEST_CASE("empirical frequency approaches the exact value at n = 4") {
  const uint64_t replicates = 1000000;
  const auto result = simulate(4, 1, replicates, 31337, 8);
  const double freq =
      static_cast<double>(result[0].counts.at(3)) / static_cast<double>(replicates);
  const double p = 2.0 / 3.0;
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(replicates));
  CHECK(std::abs(freq - p) < 3 * sigma);
}

TEST_CASE("counts stay within the support") {
  const auto result = simulate(20, 3, 5000, 4, 4);
  for (const auto& emp : result) {
    uint64_t total = 0;
    for (const auto& [s, c] : emp.counts) {
      CHECK(s >= 1);
      CHECK(s <= 20 - emp.k);
      total += c;
    }
    CHECK(total == 5000);
  }
}

TEST_CASE("gof distances vanish when the empirical equals the exact law") {
  const DistributionTable exact = distribution_table(8, 1);
  EmpiricalDistribution emp;
  emp.n = 8;
  emp.k = 1;
  emp.replicates = 5040;
  emp.seed = 0;
  for (const auto& [s, p] : exact.entries) {
    const Rational scaled = p * factorial(7);
    emp.counts[s] = scaled.get_num().get_ui();
  }
  const GofReport report = gof_compare(emp, exact);
  CHECK(report.tv == 0.0);
  CHECK(report.ks == 0.0);
  CHECK(report.chi_square == 0.0);
  CHECK(report.chi_square_dof >= 1);
}

TEST_CASE("gof on a point mass") {
  const DistributionTable exact = distribution_table(8, 1);
  EmpiricalDistribution emp;
  emp.n = 8;
  emp.k = 1;
  emp.replicates = 1000;
  emp.counts[6] = 1000;
  const GofReport report = gof_compare(emp, exact);
  CHECK(report.tv == doctest::Approx(1.0 - to_double(exact.prob(6))).epsilon(1e-12));

  EmpiricalDistribution outside = emp;
  outside.counts.clear();
  outside.counts[2] = 1000;  // impossible value for l_1 at n = 8
  CHECK(gof_compare(outside, exact).chi_square == std::numeric_limits<double>::infinity());

  EmpiricalDistribution wrong = emp;
  wrong.k = 2;
  CHECK_THROWS_AS(gof_compare(wrong, exact), std::invalid_argument);
}

TEST_CASE("sampled data passes distance checks against the exact law") {
  const int n = 100;
  const uint64_t replicates = 100000;
  const auto empiricals = simulate(n, 1, replicates, 271828, 8);
  const DistributionTable exact = distribution_table(n, 1);
  const GofReport report = gof_compare(empiricals[0], exact);
  CHECK(report.tv < 0.02);
  CHECK(report.ks < 1.63 / std::sqrt(static_cast<double>(replicates)));
  CHECK(report.chi_square <
        report.chi_square_dof + 5.0 * std::sqrt(2.0 * report.chi_square_dof));
}

TEST_CASE("coalescent samples") {
  const CoalescentSample sample = sample_coalescent(10, uint64_t{77});
  CHECK(sample.tree.leaf_count == 10);
  CHECK(sample.layer_times.size() == 9);
  for (double t : sample.layer_times) CHECK(t > 0.0);
  CHECK_THROWS_AS(sample_coalescent(1, uint64_t{1}), std::invalid_argument);

  // the bottom layer (n lineages) has mean 1 / C(n,2) = 1/45
  Rng rng(123);
  double total = 0;
  const int replicates = 100000;
  for (int r = 0; r < replicates; ++r) total += sample_coalescent(10, rng).layer_times.back();
  const double mean = total / replicates;
  const double se = (1.0 / 45.0) / std::sqrt(static_cast<double>(replicates));
  CHECK(std::abs(mean - 1.0 / 45.0) < 3 * se);
}

TEST_CASE("mean time of external branches of a given discrete length") {
  const int n = 20, s = 5;
  const auto stats = external_time_stats(n, s, 20000, 6021023, 8);
  REQUIRE(stats.observations > 1000);
  CHECK(std::abs(stats.mean - expected_external_time(n, s)) < 3 * stats.std_error);
  CHECK_THROWS_AS(external_time_stats(10, 10, 100, 1), std::invalid_argument);
}

TEST_CASE("k-th time length statistics") {
  const auto stats = kth_time_length_stats(100, 1, 4000, 555, 8);
  CHECK(stats.observations == 4000);
  CHECK(stats.mean > 0.0);

  // repeatable across worker counts, bit for bit
  const auto serial = kth_time_length_stats(100, 1, 4000, 555, 1);
  CHECK(stats.mean == serial.mean);
  CHECK(stats.std_error == serial.std_error);

  // standard error shrinks like 1/sqrt(replicates)
  const auto quadrupled = kth_time_length_stats(100, 1, 16000, 555, 8);
  const double ratio = stats.std_error / quadrupled.std_error;
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.4);

  CHECK_THROWS_AS(kth_time_length_stats(10, 6, 100, 1), std::invalid_argument);
}
