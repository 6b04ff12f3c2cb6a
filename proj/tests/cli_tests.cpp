#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string command = std::string(LONGBRANCH_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult result;
  std::array<char, 4096> buffer{};
  size_t read = 0;
  while ((read = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), read);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

/// CSV data rows: everything that is neither a comment nor the header.
std::vector<std::string> data_rows(const std::string& output) {
  std::vector<std::string> rows;
  std::istringstream stream(output);
  std::string line;
  bool header_seen = false;
  while (std::getline(stream, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string strip_comments(const std::string& output) {
  std::ostringstream kept;
  std::istringstream stream(output);
  std::string line;
  while (std::getline(stream, line))
    if (line.empty() || line[0] != '#') kept << line << '\n';
  return kept.str();
}

}  // namespace

TEST_CASE("exact-table emits the documented CSV") {
  const auto result = run_cli("exact-table --n 8 --k 1 --seed 1");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("n,k,s,prob_num,prob_den,prob_float") != std::string::npos);
  CHECK(result.output.find("# command=exact-table") != std::string::npos);
  CHECK(result.output.find("# seed=1") != std::string::npos);
  const auto rows = data_rows(result.output);
  REQUIRE(rows.size() == 4);
  const auto first = split_csv(rows[0]);
  CHECK(first[2] == "4");
  CHECK(first[3] == "1");
  CHECK(first[4] == "35");
  double total = 0;
  for (const auto& row : rows) total += std::stod(split_csv(row)[5]);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact-table at n = 3 is a single certain row") {
  const auto result = run_cli("exact-table --n 3 --k 1 --seed 1");
  CHECK(result.exit_code == 0);
  const auto rows = data_rows(result.output);
  REQUIRE(rows.size() == 1);
  const auto fields = split_csv(rows[0]);
  CHECK(fields[2] == "2");
  CHECK(fields[3] == "1");
  CHECK(fields[4] == "1");
}

TEST_CASE("float backend leaves the exact columns empty") {
  const auto result = run_cli("exact-table --n 1000 --k 2 --backend float --seed 1");
  CHECK(result.exit_code == 0);
  const auto rows = data_rows(result.output);
  CHECK(rows.size() > 100);
  for (const auto& row : rows) {
    const auto fields = split_csv(row);
    REQUIRE(fields.size() == 6);
    CHECK(fields[3].empty());
    CHECK(fields[4].empty());
    const double p = std::stod(fields[5]);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  // the float column must match the exact backend
  const auto exact = run_cli("exact-table --n 1000 --k 2 --backend exact --seed 1");
  const auto exact_rows = data_rows(exact.output);
  REQUIRE(exact_rows.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    const double approx = std::stod(split_csv(rows[i])[5]);
    const double reference = std::stod(split_csv(exact_rows[i])[5]);
    if (reference > 1e-300) CHECK(approx == doctest::Approx(reference).epsilon(1e-9));
  }
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("exact-table --n 8 --k 9 --seed 1").exit_code == 2);
  CHECK(run_cli("exact-table --n 8 --k 1 --no-such-flag").exit_code == 2);
  CHECK(run_cli("verify-oracle --max-n 11").exit_code == 2);
  CHECK(run_cli("no-such-command").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("fig3 grid output") {
  const auto result = run_cli("fig3 --n 60 --seed 1");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("k,x,exact_cdf,chi_cdf") != std::string::npos);
  const auto rows = data_rows(result.output);
  REQUIRE(rows.size() == 78);
  double previous = -1;
  int current_k = 0;
  for (const auto& row : rows) {
    const auto fields = split_csv(row);
    const int k = std::stoi(fields[0]);
    const double exact = std::stod(fields[2]);
    if (k != current_k) {
      current_k = k;
      previous = -1;
    }
    CHECK(exact >= previous);
    previous = exact;
  }
}

TEST_CASE("verify-oracle passes and reports") {
  const auto result = run_cli("verify-oracle --max-n 6 --seed 1");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("# result=pass") != std::string::npos);
}

TEST_CASE("sample emits the newick form") {
  const auto tiny = run_cli("sample --n 2 --seed 5");
  CHECK(tiny.exit_code == 0);
  CHECK(tiny.output.find("(x,x)1;") != std::string::npos);

  const auto a = run_cli("sample --n 9 --seed 5");
  const auto b = run_cli("sample --n 9 --seed 5");
  CHECK(a.output == b.output);
  CHECK(run_cli("sample --n 9 --seed 5 --method growth").exit_code == 0);
  CHECK(run_cli("sample --n 1 --seed 5").exit_code == 2);
}

TEST_CASE("simulate output is reproducible") {
  const std::string args = "simulate --n 50 --k-max 2 --replicates 5000 --seed 42";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);

  // worker count shows up in the metadata but not in the data
  const auto serial = run_cli(args + " --workers 1");
  const auto wide = run_cli(args + " --workers 4");
  CHECK(strip_comments(serial.output) == strip_comments(wide.output));
  CHECK(serial.output.find("s,count,freq,exact_prob") != std::string::npos);
}

TEST_CASE("moments ratios sit near 1 at n = 1000") {
  const auto result = run_cli("moments --n 1000 --k 1 --seed 1");
  CHECK(result.exit_code == 0);
  const auto rows = data_rows(result.output);
  REQUIRE(rows.size() == 1);
  const auto fields = split_csv(rows[0]);
  REQUIRE(fields.size() == 12);
  const double var_ratio = std::stod(fields[11]);
  CHECK(var_ratio > 0.9);
  CHECK(var_ratio < 1.1);
}

TEST_CASE("json output carries metadata and exact strings") {
  const auto result = run_cli("exact-table --n 8 --k 1 --seed 7 --format json");
  CHECK(result.exit_code == 0);
  const auto doc = nlohmann::json::parse(result.output);
  CHECK(doc["meta"]["command"] == "exact-table");
  CHECK(doc["meta"]["seed"] == 7);
  CHECK(doc["meta"]["version"] == "0.1.0");
  REQUIRE(doc["rows"].size() == 4);
  CHECK(doc["rows"][0]["prob_num"] == "1");
  CHECK(doc["rows"][0]["prob_den"] == "35");

  const auto fig = run_cli("fig3 --n 40 --seed 1 --format json");
  const auto fig_doc = nlohmann::json::parse(fig.output);
  CHECK(fig_doc["rows"].size() == 78);
}
