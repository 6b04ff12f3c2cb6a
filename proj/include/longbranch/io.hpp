#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "longbranch/asymptotics.hpp"
#include "longbranch/exact_dist.hpp"
#include "longbranch/montecarlo.hpp"

namespace longbranch {

inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { csv, json };

/// Metadata embedded in every output file: command, full configuration,
/// seed, and artifact version. CSV carries it as leading "# key=value"
/// comment lines, JSON as a "meta" object.
struct RunMeta {
  std::string command;
  uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
};

void write_table(std::ostream& os, OutputFormat format, const RunMeta& meta,
                 const DistributionTable& table);
void write_float_table(std::ostream& os, OutputFormat format, const RunMeta& meta,
                       const FloatDistributionTable& table);

void write_fig3(std::ostream& os, OutputFormat format, const RunMeta& meta,
                const std::vector<Fig3Row>& rows);

struct HistogramRow {
  int s = 0;
  uint64_t count = 0;
  double freq = 0;
  double exact_prob = 0;
};

void write_histogram(std::ostream& os, OutputFormat format, const RunMeta& meta, int k,
                     const std::vector<HistogramRow>& rows, const GofReport* gof);

struct MomentsReport {
  int n = 0;
  int k = 0;
  Rational exact_mean;
  Rational exact_var;
  double asym_mean = 0;
  double asym_var = 0;
};

void write_moments(std::ostream& os, OutputFormat format, const RunMeta& meta,
                   const MomentsReport& report);

void write_tree(std::ostream& os, OutputFormat format, const RunMeta& meta,
                const std::string& newick);

void write_oracle_report(std::ostream& os, OutputFormat format, const RunMeta& meta,
                         int max_n, const std::vector<OracleMismatch>& mismatches);

}  // namespace longbranch
