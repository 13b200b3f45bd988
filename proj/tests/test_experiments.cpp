#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qnl_eam/csv.hpp"
#include "qnl_eam/experiments.hpp"

using namespace qnl_eam;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qnl_eam_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(QNL_EAM_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    out.push_back(l);
  }
  return out;
}

}  // namespace

TEST(Csv, Format) {
  csv::Table t({"a", "b", "c"});
  t.add({1, 0.5, std::string("x,y")});
  t.add({-2, 1e-300, std::string("say \"hi\"")});
  EXPECT_EQ(t.str(),
            "a,b,c\r\n"
            "1,5.000000000000000e-01,\"x,y\"\r\n"
            "-2,1.000000000000000e-300,\"say \"\"hi\"\"\"\r\n");
  EXPECT_THROW(t.add({1, 2}), std::invalid_argument);
}

TEST(Config, ParsesAndOverrides) {
  ExperimentConfig cfg;
  apply_entries(cfg, kv::parse_string("command = converge\nN-list = 64, 128,256\nK-rule = power:0.5\nF = 1.05\n"));
  EXPECT_EQ(cfg.command, "converge");
  EXPECT_EQ(cfg.N_list, (std::vector<int>{64, 128, 256}));
  EXPECT_EQ(K_rule_of(cfg)(256), 16);
  EXPECT_EQ(*cfg.F, 1.05);
  apply_entries(cfg, {{"F", "1.1", 0}});
  EXPECT_EQ(*cfg.F, 1.1);
  EXPECT_NO_THROW(validate_config(cfg));
}

TEST(Config, Defaults) {
  ExperimentConfig cfg;
  cfg.command = "spectrum";
  EXPECT_EQ(N_values(cfg), std::vector<int>{8});
  cfg.command = "converge";
  EXPECT_EQ(N_values(cfg).size(), 5u);
  EXPECT_EQ(K_rule_of(cfg)(1024), 8);
  EXPECT_EQ(default_potential_for("remark44"), "remark44");
  EXPECT_EQ(default_potential_for("converge"), "default");
}

TEST(Config, Errors) {
  ExperimentConfig cfg;
  try {
    apply_entries(cfg, kv::parse_string("command = spectrum\n# c\nwidth = 3\n"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  auto bad = [](const std::string& text) {
    ExperimentConfig c;
    apply_entries(c, kv::parse_string(text));
    validate_config(c);
  };
  EXPECT_THROW(bad("command = frobnicate\n"), ParseError);
  EXPECT_THROW(bad("command = spectrum\nF = -1\n"), ParseError);
  EXPECT_THROW(bad("command = spectrum\nN = 3\n"), ParseError);
  EXPECT_THROW(bad("command = converge\nN-list = 128,64\n"), ParseError);
  EXPECT_THROW(bad("command = converge\nN-list = 64\n"), ParseError);
  EXPECT_THROW(bad("command = converge\nN-list = 8,16\nK = 4\n"), ParseError);
  EXPECT_THROW(bad("command = spectrum\npotential = nowhere.pot\n"), ParseError);
  EXPECT_THROW(bad("command = spectrum\nF-range = 1.1,1.0\n"), ParseError);
  EXPECT_THROW(bad("command = converge\nK-rule = linear:3\n"), ParseError);
}

TEST(Cli, SpectrumRows) {
  const fs::path dir = scratch("spectrum");
  ASSERT_EQ(cli("spectrum --N 8 --out " + dir.string(), dir / "log"), 0) << slurp(dir / "log");
  const auto rows = lines(slurp(dir / "spectrum.csv"));
  ASSERT_EQ(rows.size(), 17u);
  EXPECT_EQ(rows[0], "F,N,k,s_k,lambda_k");
  EXPECT_NE(slurp(dir / "log").find("wrote"), std::string::npos);
}

TEST(Cli, ConvergeOutputAndDeterminism) {
  const fs::path a = scratch("converge_a"), b = scratch("converge_b");
  ASSERT_EQ(cli("converge --out " + a.string(), a / "log"), 0) << slurp(a / "log");
  ASSERT_EQ(cli("converge --out " + b.string(), b / "log"), 0);
  const std::string ca = slurp(a / "converge.csv");
  const auto rows = lines(ca);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_NE(rows[0].find("error_slope_all"), std::string::npos);
  EXPECT_NE(rows[0].find("error_slope_tail"), std::string::npos);
  EXPECT_EQ(ca, slurp(b / "converge.csv"));
  EXPECT_TRUE(fs::exists(a / "converge_timing.csv"));
  EXPECT_TRUE(fs::exists(a / "converge.gp"));
}

TEST(Cli, ConfigFileAndPotentialFile) {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "run.cfg") << "command = spectrum\nN = 16\npotential = " << QNL_EAM_POTENTIALS
                                 << "/remark44.pot\nout = " << dir.string() << "\n";
  ASSERT_EQ(cli("--config " + (dir / "run.cfg").string(), dir / "log"), 0) << slurp(dir / "log");
  EXPECT_EQ(lines(slurp(dir / "spectrum.csv")).size(), 33u);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("codes");
  EXPECT_EQ(cli("--help", dir / "log"), 0);
  EXPECT_EQ(cli("frobnicate", dir / "log"), 2);
  EXPECT_EQ(cli("spectrum --N 2", dir / "log"), 2);
  EXPECT_EQ(cli("spectrum --no-such-flag", dir / "log"), 2);
  std::ofstream(dir / "bad.cfg") << "command = spectrum\n\nbogus = 1\n";
  EXPECT_EQ(cli("--config " + (dir / "bad.cfg").string(), dir / "log"), 2);
  EXPECT_NE(slurp(dir / "log").find("line 3"), std::string::npos) << slurp(dir / "log");
  // the bracket holds no stability change
  EXPECT_EQ(cli("critical-strain --N-list 16,32 --K 4 --F-range 0.95,1.0 --out " + dir.string(), dir / "log"), 3);
  EXPECT_NE(slurp(dir / "log").find("critical-strain"), std::string::npos);
}

TEST(Cli, RunValidate) {
  const fs::path dir = scratch("validate");
  ExperimentConfig cfg;
  cfg.command = "validate";
  cfg.N = 8;
  cfg.K = 2;
  cfg.out = dir.string();
  std::ostringstream log;
  const RunResult r = run(cfg, log);
  EXPECT_EQ(r.status, 0) << log.str();
  EXPECT_EQ(r.files.size(), 2u);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name;
}
