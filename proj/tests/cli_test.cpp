#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>

#include "data/gamma_tables.hpp"
#include "gammak/cli.hpp"

using namespace gammak;

namespace {

struct result {
  int code;
  std::string out;
  std::string err;
};

result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gammak");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  const auto r = run_cli(std::move(args));
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

// Rebuilds ascending integer coefficients from one LaTeX cell such as
// "-2 c^{8}+24 c^{7}+...-927", "c^{8}" or "(3-c)^{8}".
std::vector<big_int> parse_latex_poly(std::string s, int k) {
  const int n = k * k - 1;
  std::vector<big_int> out(static_cast<std::size_t>(n + 1), 0);
  std::smatch m;
  if (std::regex_match(s, m, std::regex(R"(\((\d+)-c\)\^\{(\d+)\})"))) {
    const auto p = power_of_linear(big_rational(std::stoi(m[1])), static_cast<unsigned>(std::stoi(m[2])));
    const bool odd = std::stoi(m[2]) % 2;
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = numerator(odd ? big_rational(-p[i]) : p[i]);
    return out;
  }
  const std::regex term(R"(([+-]?)(\d*)\s*(c(\^\{(\d+)\})?)?)");
  for (auto it = std::sregex_iterator(s.begin(), s.end(), term); it != std::sregex_iterator(); ++it) {
    const auto& t = *it;
    if (t.length() == 0) continue;
    big_int mag = t[2].length() ? big_int(t[2].str()) : big_int(1);
    const int power = t[3].length() == 0 ? 0 : t[5].length() ? std::stoi(t[5]) : 1;
    if (t[1] == "-") mag = -mag;
    out[static_cast<std::size_t>(power)] += mag;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" $");
  const auto b = s.find_last_not_of(" $");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

TEST(Cli, UnknownCommandIsUsageError) {
  const auto r = run_cli({"bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("gamma-table"), std::string::npos);
  EXPECT_EQ(run_cli({}).code, 1);
}

TEST(Cli, HelpSucceeds) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("aliquot"), std::string::npos);
}

TEST(Cli, BadArgumentsExitOne) {
  EXPECT_EQ(run_cli({"gamma", "--k", "9", "--c", "1"}).code, 1);
  EXPECT_EQ(run_cli({"gamma", "--k", "2"}).code, 1);
  EXPECT_EQ(run_cli({"gamma", "--k", "2", "--c", "1/0"}).code, 1);
  EXPECT_EQ(run_cli({"divisor-variance", "--k", "2", "--X", "1000", "--alpha", "1/2"}).code, 1);
  EXPECT_EQ(run_cli({"--format", "xml", "gamma", "--k", "2", "--c", "1"}).code, 1);
  EXPECT_EQ(run_cli({"--format", "latex", "aliquot", "--d", "1"}).code, 1);
}

TEST(Cli, GammaOutsideSupport) {
  const auto j = run_json({"gamma", "--k", "2", "--c", "5"});
  EXPECT_EQ(j["exact"], "0");
  EXPECT_EQ(j["schema_version"], report_schema_version);
  EXPECT_EQ(run_json({"gamma", "--k", "2", "--c", "1/2"})["exact"], "1/48");
}

TEST(Cli, GammaNumericEngine) {
  const auto j = run_json({"--digits", "30", "gamma", "--k", "3", "--c", "7/5", "--engine", "numeric"});
  EXPECT_EQ(j["engine"], "numeric");
  for (const auto& c : j["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
}

TEST(Cli, AliquotTwoToFiftyDigits) {
  const auto j = run_json({"--digits", "50", "aliquot", "--d", "2"});
  const std::string v = j["I_d"];
  EXPECT_EQ(v, "1." + std::string(49, '3'));
  for (const auto& c : j["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
}

TEST(Cli, GammaTableLatexMatchesReferenceRows) {
  const auto r = run_cli({"--format", "latex", "gamma-table", "--k", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\\begin{tabular}{|c|c|l|}"), std::string::npos);
  EXPECT_NE(r.out.find("$ c^{8}$"), std::string::npos);
  EXPECT_NE(r.out.find("$ (3-c)^{8}$"), std::string::npos);

  std::map<int, std::string> cells;
  int current = -1;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("\\", 0) == 0 || line.rfind("$k$", 0) == 0) continue;
    const auto bar1 = line.find('&');
    const auto bar2 = line.find('&', bar1 + 1);
    const auto end = line.rfind("\\\\");
    if (bar1 == std::string::npos || bar2 == std::string::npos || end == std::string::npos) continue;
    const std::string jcell = trim(line.substr(bar1 + 1, bar2 - bar1 - 1));
    if (!jcell.empty()) current = std::stoi(jcell);
    cells[current] += trim(line.substr(bar2 + 1, end - bar2 - 1));
  }
  ASSERT_EQ(cells.size(), 3u);
  for (const auto& row : testdata::gamma_table_rows()) {
    if (row.k != 3) continue;
    const auto got = parse_latex_poly(cells[row.j], 3);
    for (std::size_t i = 0; i < row.coeffs.size(); ++i)
      EXPECT_EQ(got[i], big_int(std::string(row.coeffs[i]))) << "j=" << row.j << " power " << i;
  }
}

TEST(Cli, GammaExactInvariantsAndMass) {
  const auto j = run_json({"gamma-exact", "--k", "3"});
  EXPECT_EQ(j["mass"], "1/8640");
  bool saw_mass = false;
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
    saw_mass = saw_mass || c["name"].get<std::string>().find("mass") != std::string::npos;
  }
  EXPECT_TRUE(saw_mass);
}

TEST(Cli, TodaCoefficientsCsv) {
  const auto r = run_cli({"--format", "csv", "toda-coeffs", "--k", "3", "--max-m", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("m,", 0), 0u);
  EXPECT_NE(r.out.find("1/58800"), std::string::npos);
}

TEST(Cli, IdentityChecksPass) {
  for (const char* cmd : {"painleve-check", "toda-check"}) {
    const auto j = run_json({"--digits", "30", cmd, "--k", "3", "--t-grid", "1/2,2"});
    ASSERT_EQ(j["rows"].size(), 2u);
    for (const auto& c : j["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << cmd << " " << c.dump();
  }
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::string> args{"--digits", "30", "--format", "plain", "aliquot", "--d", "3", "--cf"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
  const std::vector<std::string> t1{"--threads", "1", "gamma-table", "--k", "4"};
  const std::vector<std::string> t4{"--threads", "4", "gamma-table", "--k", "4"};
  EXPECT_EQ(run_cli(t1).out, run_cli(t4).out);
}

TEST(Cli, ConfigFileAndPrecedence) {
  const auto dir = std::filesystem::temp_directory_path() / "gammak_cli_config_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "run.ini";
  std::ofstream(file) << "digits=25\nformat=plain\n";
  const auto from_file = run_cli({"--config", file.string(), "gamma", "--k", "2", "--c", "1/2"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_NE(from_file.out.find("exact: 1/48"), std::string::npos);
  EXPECT_NE(from_file.out.find("digits: 25"), std::string::npos);
  const auto overridden = run_cli({"--config", file.string(), "--digits", "40", "gamma", "--k", "2", "--c", "1/2"});
  EXPECT_NE(overridden.out.find("digits: 40"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, CacheDirectoryFromEnvironment) {
  const auto dir = std::filesystem::temp_directory_path() / "gammak_cli_cache_test";
  std::filesystem::remove_all(dir);
  ::setenv(cli::cache_dir_env, dir.c_str(), 1);
  const auto r = run_cli({"--digits", "20", "divisor-variance", "--k", "2", "--X", "2000", "--alpha", "3/10"});
  ::unsetenv(cli::cache_dir_env);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir));
  EXPECT_FALSE(std::filesystem::is_empty(dir));
  std::filesystem::remove_all(dir);
}

TEST(Report, RenderFormats) {
  json r{{"command", "demo"}, {"value", "1/3"}, {"rows", json::array({json{{"a", 1}, {"b", "x,y"}}})}};
  EXPECT_EQ(json::parse(render(r, output_format::json)), r);
  EXPECT_EQ(render(r, output_format::csv), "a,b\n1,\"x,y\"\n");
  EXPECT_NE(render(r, output_format::plain).find("value: 1/3"), std::string::npos);
  EXPECT_THROW(render(r, output_format::latex), std::invalid_argument);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
}
