// Command-line driver for the QNL/EAM chain experiments.
//
//   qnl_eam <command> [--config FILE] [--potential P] [--F X] [--F-range lo,hi[,n]]
//           [--N n] [--N-list a,b,...] [--K k] [--K-rule fixed:k|power:t]
//           [--out DIR] [--seed S]
//
// Exit status: 0 all checks passed, 1 a check failed, 2 bad configuration,
// 3 numerical failure.

#include <CLI11.hpp>

#include <iostream>

#include "qnl_eam/experiments.hpp"

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : "|") + x;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qnl_eam;

  CLI::App app{"Atomistic, QNL and QCL models of an EAM chain: stability and convergence experiments"};
  app.set_version_flag("--version", "qnl_eam 1.0");

  std::string command, config, potential, F, F_range, N, N_list, K, K_rule, out, seed;
  app.add_option("command", command, "one of " + join(commands()));
  app.add_option("--config", config, "key = value file; flags given here override it");
  app.add_option("--potential", potential, "potential file or built-in name (default, remark44, pair)");
  app.add_option("--F", F, "uniform strain");
  app.add_option("--F-range", F_range, "lo,hi[,count]: bracket or sweep over F");
  app.add_option("--N", N, "half period");
  app.add_option("--N-list", N_list, "comma-separated, strictly increasing");
  app.add_option("--K", K, "atomistic half-width");
  app.add_option("--K-rule", K_rule, "fixed:<K> or power:<theta> (K = floor(N^theta))");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed of the randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ExperimentConfig cfg;
  try {
    if (!config.empty()) cfg = load_config(config);
    // flags override the file; they go through the same parser
    std::vector<kv::Entry> flags;
    auto flag = [&](const char* key, const std::string& v) {
      if (!v.empty()) flags.push_back({key, v, 0});
    };
    flag("command", command);
    flag("potential", potential);
    flag("F", F);
    flag("F-range", F_range);
    flag("N", N);
    flag("N-list", N_list);
    flag("K", K);
    flag("K-rule", K_rule);
    flag("out", out);
    flag("seed", seed);
    apply_entries(cfg, flags);
    if (cfg.command.empty()) throw ParseError("no command given (" + join(commands()) + ")", 0);
    validate_config(cfg);
  } catch (const ParseError& e) {
    std::cerr << "qnl_eam: configuration error: " << (config.empty() ? "" : config + ": ") << e.what() << '\n';
    return 2;
  }

  try {
    const RunResult r = run(cfg, std::cout);
    if (r.status == 3) {
      std::cerr << "qnl_eam: numerical failure in " << r.error << '\n';
      return 3;
    }
    for (const auto& f : r.files) std::cout << "wrote " << f.string() << '\n';
    return r.status;
  } catch (const ParseError& e) {
    std::cerr << "qnl_eam: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qnl_eam: " << cfg.command << ": " << e.what() << '\n';
    return 3;
  }
}
