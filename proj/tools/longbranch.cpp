#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "longbranch/asymptotics.hpp"
#include "longbranch/exact_dist.hpp"
#include "longbranch/histories.hpp"
#include "longbranch/io.hpp"
#include "longbranch/montecarlo.hpp"
#include "longbranch/permutations.hpp"

namespace {

using namespace longbranch;

constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  std::string format = "csv";
  std::string out;
  std::optional<uint64_t> seed;
};

uint64_t resolve_seed(const CommonOpts& opts) {
  if (opts.seed) return *opts.seed;
  std::random_device entropy;
  return (static_cast<uint64_t>(entropy()) << 32) ^ entropy();
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw CLI::ValidationError("--format must be csv or json");
}

/// Runs fn against --out (or stdout) and reports the produced path.
template <typename Fn>
void with_output(const CommonOpts& opts, const Fn& fn) {
  if (opts.out.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream file(opts.out);
  if (!file) throw std::runtime_error("cannot open output file: " + opts.out);
  fn(file);
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--format", opts.format, "Output format (csv|json)")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", opts.out, "Output path (default stdout)");
  cmd->add_option("--seed", opts.seed, "RNG seed (default drawn from entropy, then recorded)");
}

std::string with_k_suffix(const std::string& path, int k) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || dot == 0) return path + ".k" + std::to_string(k);
  return path.substr(0, dot) + ".k" + std::to_string(k) + path.substr(dot);
}

int run_exact_table(int n, int k, const std::string& backend, int exact_limit,
                    const CommonOpts& opts) {
  const uint64_t seed = resolve_seed(opts);
  const bool use_exact = backend == "exact" || (backend == "auto" && n <= exact_limit);
  RunMeta meta{"exact-table",
               seed,
               {{"n", std::to_string(n)},
                {"k", std::to_string(k)},
                {"backend", use_exact ? "exact" : "float"},
                {"format", opts.format}}};
  const OutputFormat format = parse_format(opts.format);
  if (use_exact) {
    const DistributionTable table = distribution_table(n, k);
    with_output(opts, [&](std::ostream& os) { write_table(os, format, meta, table); });
  } else {
    const FloatDistributionTable table = float_distribution_table(n, k);
    with_output(opts, [&](std::ostream& os) { write_float_table(os, format, meta, table); });
  }
  return 0;
}

int run_fig3(int n, const CommonOpts& opts) {
  const uint64_t seed = resolve_seed(opts);
  RunMeta meta{"fig3", seed, {{"n", std::to_string(n)}, {"format", opts.format}}};
  const auto rows = fig3_rows(n);
  const OutputFormat format = parse_format(opts.format);
  with_output(opts, [&](std::ostream& os) { write_fig3(os, format, meta, rows); });
  return 0;
}

int run_verify_oracle(int max_n, const CommonOpts& opts) {
  const uint64_t seed = resolve_seed(opts);
  RunMeta meta{"verify-oracle", seed, {{"max_n", std::to_string(max_n)}, {"format", opts.format}}};
  const auto mismatches = oracle_mismatches(max_n);
  const OutputFormat format = parse_format(opts.format);
  with_output(opts,
              [&](std::ostream& os) { write_oracle_report(os, format, meta, max_n, mismatches); });
  if (!mismatches.empty()) {
    std::cerr << "verify-oracle: " << mismatches.size() << " mismatching entries\n";
    return kExitVerificationFailure;
  }
  return 0;
}

int run_sample(int n, const std::string& method, const CommonOpts& opts) {
  const uint64_t seed = resolve_seed(opts);
  RunMeta meta{"sample",
               seed,
               {{"n", std::to_string(n)}, {"method", method}, {"format", opts.format}}};
  const OrderedHistory tree =
      method == "growth" ? sample_yule_growth(n, seed) : sample_uniform(n, seed);
  const OutputFormat format = parse_format(opts.format);
  with_output(opts, [&](std::ostream& os) { write_tree(os, format, meta, to_newick(tree)); });
  return 0;
}

int run_simulate(int n, int k_max, uint64_t replicates, int workers, int exact_limit,
                 const CommonOpts& opts) {
  const uint64_t seed = resolve_seed(opts);
  const auto empiricals = simulate(n, k_max, replicates, seed, workers);
  const OutputFormat format = parse_format(opts.format);
  const bool exact_available = n <= exact_limit;

  for (const auto& emp : empiricals) {
    RunMeta meta{"simulate",
                 seed,
                 {{"n", std::to_string(n)},
                  {"k_max", std::to_string(k_max)},
                  {"replicates", std::to_string(replicates)},
                  {"workers", std::to_string(workers)},
                  {"format", opts.format}}};
    std::vector<HistogramRow> rows;
    GofReport gof;
    const GofReport* gof_ptr = nullptr;
    DistributionTable exact;
    FloatDistributionTable approx;
    if (exact_available) {
      exact = distribution_table(n, emp.k);
      gof = gof_compare(emp, exact);
      gof_ptr = &gof;
    } else {
      approx = float_distribution_table(n, emp.k);
    }
    auto exact_prob = [&](int s) {
      if (exact_available) return to_double(exact.prob(s));
      for (const auto& [value, p] : approx.entries)
        if (value == s) return p;
      return 0.0;
    };
    int lo = emp.counts.empty() ? 1 : emp.counts.begin()->first;
    int hi = emp.counts.empty() ? 0 : emp.counts.rbegin()->first;
    if (exact_available && !exact.entries.empty()) {
      lo = std::min(lo, exact.entries.front().first);
      hi = std::max(hi, exact.entries.back().first);
    } else if (!approx.entries.empty()) {
      lo = std::min(lo, approx.entries.front().first);
      hi = std::max(hi, approx.entries.back().first);
    }
    for (int s = lo; s <= hi; ++s) {
      const auto it = emp.counts.find(s);
      const uint64_t count = it == emp.counts.end() ? 0 : it->second;
      const double p = exact_prob(s);
      if (count == 0 && p == 0.0) continue;
      rows.push_back({s, count, static_cast<double>(count) / static_cast<double>(replicates), p});
    }

    CommonOpts per_k = opts;
    if (!opts.out.empty() && k_max > 1) per_k.out = with_k_suffix(opts.out, emp.k);
    with_output(per_k, [&](std::ostream& os) {
      write_histogram(os, format, meta, emp.k, rows, gof_ptr);
    });
  }
  return 0;
}

int run_moments(int n, int k, const CommonOpts& opts) {
  const uint64_t seed = resolve_seed(opts);
  RunMeta meta{"moments",
               seed,
               {{"n", std::to_string(n)}, {"k", std::to_string(k)}, {"format", opts.format}}};
  const auto [mean, var] = exact_mean_var(n, k);
  MomentsReport report{n, k, mean, var, asymptotic_mean(n, k), asymptotic_var(n, k)};
  const OutputFormat format = parse_format(opts.format);
  with_output(opts, [&](std::ostream& os) { write_moments(os, format, meta, report); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "longbranch: exact and asymptotic distribution of the k-th largest external\n"
      "branch length of Yule-distributed random histories, with samplers, an\n"
      "enumeration oracle, and Monte Carlo validation.\n\n"
      "The exhaustive-enumeration bound defaults to 10 and can be overridden\n"
      "with the LONGBRANCH_ENUM_BOUND environment variable."};
  app.require_subcommand(1);

  int n = 0, k = 1, k_max = 1, max_n = 9, workers = 1, exact_limit = 2000;
  uint64_t replicates = 1;
  std::string backend = "auto", method = "uniform";

  CommonOpts table_opts;
  auto* table_cmd = app.add_subcommand("exact-table", "Exact pmf table of l_k at fixed n");
  table_cmd->add_option("--n", n, "Number of leaves")->required();
  table_cmd->add_option("--k", k, "Which length (1 = longest)")->capture_default_str();
  table_cmd->add_option("--backend", backend, "exact|float|auto")
      ->check(CLI::IsMember({"exact", "float", "auto"}))
      ->capture_default_str();
  table_cmd->add_option("--exact-limit", exact_limit, "Largest n the auto backend keeps exact")
      ->capture_default_str();
  add_common(table_cmd, table_opts);

  CommonOpts fig3_opts;
  auto* fig3_cmd = app.add_subcommand(
      "fig3", "Exact vs chi(2k) cdf of the rescaled variable, k = 1..3, x = 0(0.2)5");
  int fig3_n = 1000;
  fig3_cmd->add_option("--n", fig3_n, "Number of leaves")->capture_default_str();
  add_common(fig3_cmd, fig3_opts);

  CommonOpts verify_opts;
  auto* verify_cmd = app.add_subcommand(
      "verify-oracle", "Compare the analytic pmf against exhaustive enumeration");
  verify_cmd->add_option("--max-n", max_n, "Largest n to enumerate (<= 10)")
      ->check(CLI::Range(3, 10))
      ->capture_default_str();
  add_common(verify_cmd, verify_opts);

  CommonOpts sample_opts;
  auto* sample_cmd = app.add_subcommand("sample", "Draw one ordered history");
  sample_cmd->add_option("--n", n, "Number of leaves")->required();
  sample_cmd->add_option("--method", method, "uniform|growth")
      ->check(CLI::IsMember({"uniform", "growth"}))
      ->capture_default_str();
  add_common(sample_cmd, sample_opts);

  CommonOpts simulate_opts;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Empirical distribution of l_k from sampled histories");
  simulate_cmd->add_option("--n", n, "Number of leaves")->required();
  simulate_cmd->add_option("--k-max", k_max, "Tally l_1..l_k_max")->capture_default_str();
  simulate_cmd->add_option("--replicates", replicates, "Number of sampled histories")
      ->capture_default_str();
  simulate_cmd->add_option("--workers", workers, "Worker threads")->capture_default_str();
  simulate_cmd->add_option("--exact-limit", exact_limit, "Largest n with exact reference column")
      ->capture_default_str();
  add_common(simulate_cmd, simulate_opts);

  CommonOpts moments_opts;
  auto* moments_cmd =
      app.add_subcommand("moments", "Exact mean/variance of l_k next to the asymptotic law");
  moments_cmd->add_option("--n", n, "Number of leaves")->required();
  moments_cmd->add_option("--k", k, "Which length (1 = longest)")->capture_default_str();
  add_common(moments_cmd, moments_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (table_cmd->parsed()) return run_exact_table(n, k, backend, exact_limit, table_opts);
    if (fig3_cmd->parsed()) return run_fig3(fig3_n, fig3_opts);
    if (verify_cmd->parsed()) return run_verify_oracle(max_n, verify_opts);
    if (sample_cmd->parsed()) return run_sample(n, method, sample_opts);
    if (simulate_cmd->parsed())
      return run_simulate(n, k_max, replicates, workers, exact_limit, simulate_opts);
    if (moments_cmd->parsed()) return run_moments(n, k, moments_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
