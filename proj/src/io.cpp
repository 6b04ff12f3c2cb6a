#include "longbranch/io.hpp"

#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace longbranch {

namespace {

using nlohmann::json;

void write_meta_csv(std::ostream& os, const RunMeta& meta) {
  os << "# command=" << meta.command << '\n';
  os << "# version=" << kVersion << '\n';
  os << "# seed=" << meta.seed << '\n';
  for (const auto& [key, value] : meta.config) os << "# " << key << '=' << value << '\n';
}

json meta_json(const RunMeta& meta) {
  json config = json::object();
  for (const auto& [key, value] : meta.config) config[key] = value;
  return json{{"command", meta.command},
              {"version", kVersion},
              {"seed", meta.seed},
              {"config", config}};
}

std::string float_text(double value) {
  std::ostringstream ss;
  ss << std::setprecision(17) << value;
  return ss.str();
}

void dump(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

}  // namespace

void write_table(std::ostream& os, OutputFormat format, const RunMeta& meta,
                 const DistributionTable& table) {
  if (format == OutputFormat::csv) {
    write_meta_csv(os, meta);
    os << "n,k,s,prob_num,prob_den,prob_float\n";
    for (const auto& [s, p] : table.entries)
      os << table.n << ',' << table.k << ',' << s << ',' << p.get_num().get_str() << ','
         << p.get_den().get_str() << ',' << float_text(to_double(p)) << '\n';
    return;
  }
  json rows = json::array();
  for (const auto& [s, p] : table.entries)
    rows.push_back(json{{"n", table.n},
                        {"k", table.k},
                        {"s", s},
                        {"prob_num", p.get_num().get_str()},
                        {"prob_den", p.get_den().get_str()},
                        {"prob_float", to_double(p)}});
  dump(os, json{{"meta", meta_json(meta)}, {"rows", rows}});
}

void write_float_table(std::ostream& os, OutputFormat format, const RunMeta& meta,
                       const FloatDistributionTable& table) {
  if (format == OutputFormat::csv) {
    write_meta_csv(os, meta);
    os << "n,k,s,prob_num,prob_den,prob_float\n";
    for (const auto& [s, p] : table.entries)
      os << table.n << ',' << table.k << ',' << s << ",,," << float_text(p) << '\n';
    return;
  }
  json rows = json::array();
  for (const auto& [s, p] : table.entries)
    rows.push_back(json{{"n", table.n},
                        {"k", table.k},
                        {"s", s},
                        {"prob_num", nullptr},
                        {"prob_den", nullptr},
                        {"prob_float", p}});
  dump(os, json{{"meta", meta_json(meta)}, {"rows", rows}});
}

void write_fig3(std::ostream& os, OutputFormat format, const RunMeta& meta,
                const std::vector<Fig3Row>& rows) {
  if (format == OutputFormat::csv) {
    write_meta_csv(os, meta);
    os << "k,x,exact_cdf,chi_cdf\n";
    for (const auto& row : rows)
      os << row.k << ',' << float_text(row.x) << ',' << float_text(row.exact_cdf) << ','
         << float_text(row.chi_cdf) << '\n';
    return;
  }
  json out = json::array();
  for (const auto& row : rows)
    out.push_back(json{
        {"k", row.k}, {"x", row.x}, {"exact_cdf", row.exact_cdf}, {"chi_cdf", row.chi_cdf}});
  dump(os, json{{"meta", meta_json(meta)}, {"rows", out}});
}

void write_histogram(std::ostream& os, OutputFormat format, const RunMeta& meta, int k,
                     const std::vector<HistogramRow>& rows, const GofReport* gof) {
  if (format == OutputFormat::csv) {
    write_meta_csv(os, meta);
    os << "# k=" << k << '\n';
    if (gof) {
      os << "# tv=" << float_text(gof->tv) << '\n';
      os << "# ks=" << float_text(gof->ks) << '\n';
      os << "# chi_square=" << float_text(gof->chi_square) << '\n';
      os << "# chi_square_dof=" << gof->chi_square_dof << '\n';
    }
    os << "s,count,freq,exact_prob\n";
    for (const auto& row : rows)
      os << row.s << ',' << row.count << ',' << float_text(row.freq) << ','
         << float_text(row.exact_prob) << '\n';
    return;
  }
  json out = json::array();
  for (const auto& row : rows)
    out.push_back(json{{"s", row.s},
                       {"count", row.count},
                       {"freq", row.freq},
                       {"exact_prob", row.exact_prob}});
  json doc{{"meta", meta_json(meta)}, {"k", k}, {"rows", out}};
  if (gof)
    doc["gof"] = json{{"tv", gof->tv},
                      {"ks", gof->ks},
                      {"chi_square", gof->chi_square},
                      {"chi_square_dof", gof->chi_square_dof}};
  dump(os, doc);
}

void write_moments(std::ostream& os, OutputFormat format, const RunMeta& meta,
                   const MomentsReport& report) {
  const double mean_float = to_double(report.exact_mean);
  const double var_float = to_double(report.exact_var);
  const double mean_ratio = mean_float / report.asym_mean;
  const double var_ratio = report.asym_var == 0 ? std::numeric_limits<double>::quiet_NaN()
                                                : var_float / report.asym_var;
  if (format == OutputFormat::csv) {
    write_meta_csv(os, meta);
    os << "n,k,mean_num,mean_den,mean_float,var_num,var_den,var_float,"
          "asym_mean,asym_var,mean_ratio,var_ratio\n";
    os << report.n << ',' << report.k << ',' << report.exact_mean.get_num().get_str() << ','
       << report.exact_mean.get_den().get_str() << ',' << float_text(mean_float) << ','
       << report.exact_var.get_num().get_str() << ',' << report.exact_var.get_den().get_str()
       << ',' << float_text(var_float) << ',' << float_text(report.asym_mean) << ','
       << float_text(report.asym_var) << ',' << float_text(mean_ratio) << ','
       << float_text(var_ratio) << '\n';
    return;
  }
  dump(os, json{{"meta", meta_json(meta)},
                {"n", report.n},
                {"k", report.k},
                {"exact_mean", {{"num", report.exact_mean.get_num().get_str()},
                                {"den", report.exact_mean.get_den().get_str()},
                                {"float", mean_float}}},
                {"exact_var", {{"num", report.exact_var.get_num().get_str()},
                               {"den", report.exact_var.get_den().get_str()},
                               {"float", var_float}}},
                {"asym_mean", report.asym_mean},
                {"asym_var", report.asym_var},
                {"mean_ratio", mean_ratio},
                {"var_ratio", var_ratio}});
}

void write_tree(std::ostream& os, OutputFormat format, const RunMeta& meta,
                const std::string& newick) {
  if (format == OutputFormat::csv) {
    write_meta_csv(os, meta);
    os << newick << '\n';
    return;
  }
  dump(os, json{{"meta", meta_json(meta)}, {"tree", newick}});
}

void write_oracle_report(std::ostream& os, OutputFormat format, const RunMeta& meta,
                         int max_n, const std::vector<OracleMismatch>& mismatches) {
  if (format == OutputFormat::csv) {
    write_meta_csv(os, meta);
    os << "# max_n=" << max_n << '\n';
    os << "n,k,s,expected_num,expected_den,got_num,got_den\n";
    for (const auto& m : mismatches)
      os << m.n << ',' << m.k << ',' << m.s << ',' << m.expected.get_num().get_str() << ','
         << m.expected.get_den().get_str() << ',' << m.got.get_num().get_str() << ','
         << m.got.get_den().get_str() << '\n';
    os << "# result=" << (mismatches.empty() ? "pass" : "fail") << '\n';
    return;
  }
  json rows = json::array();
  for (const auto& m : mismatches)
    rows.push_back(json{{"n", m.n},
                        {"k", m.k},
                        {"s", m.s},
                        {"expected_num", m.expected.get_num().get_str()},
                        {"expected_den", m.expected.get_den().get_str()},
                        {"got_num", m.got.get_num().get_str()},
                        {"got_den", m.got.get_den().get_str()}});
  dump(os, json{{"meta", meta_json(meta)},
                {"max_n", max_n},
                {"result", mismatches.empty() ? "pass" : "fail"},
                {"mismatches", rows}});
}

}  // namespace longbranch
