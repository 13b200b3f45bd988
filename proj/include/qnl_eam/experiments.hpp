#pragma once

// Batch experiments behind the command-line driver. Each command computes all
// of its points first and then writes its CSV files once.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "qnl_eam/assumptions.hpp"
#include "qnl_eam/builtin_potentials.hpp"
#include "qnl_eam/checks.hpp"
#include "qnl_eam/csv.hpp"
#include "qnl_eam/errors.hpp"
#include "qnl_eam/keyvalue.hpp"
#include "qnl_eam/potential_io.hpp"
#include "qnl_eam/solver.hpp"
#include "qnl_eam/stability.hpp"

namespace qnl_eam {

struct FRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 2;

  std::vector<double> points() const {
    if (count == 1) return {lo};
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
    return v;
  }
};

struct ExperimentConfig {
  std::string command;
  std::string potential;  ///< file path or built-in name (default, remark44, pair)
  std::optional<double> F;
  std::optional<FRange> F_range;
  std::optional<int> N;
  std::vector<int> N_list;
  std::optional<int> K;
  std::string K_rule;  ///< "fixed:<K>" or "power:<theta>"
  std::string out = "out";
  unsigned seed = 20100423;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"validate", "spectrum", "critical-strain",
                                          "converge", "consistency", "remark44"};
  return c;
}

namespace detail {

inline std::vector<int> parse_int_list(const kv::Entry& e) {
  std::vector<int> out;
  for (const std::string& s : kv::split_list(e.value)) out.push_back(kv::to_int({e.key, s, e.line}));
  if (out.empty()) throw ParseError("key '" + e.key + "': empty list", e.line);
  return out;
}

/// "lo,hi" or "lo,hi,count".
inline FRange parse_F_range(const kv::Entry& e) {
  const auto parts = kv::split_list(e.value);
  if (parts.size() != 2 && parts.size() != 3)
    throw ParseError("key '" + e.key + "': expected lo,hi[,count]", e.line);
  FRange r;
  r.lo = kv::to_double({e.key, parts[0], e.line});
  r.hi = kv::to_double({e.key, parts[1], e.line});
  if (parts.size() == 3) r.count = kv::to_int({e.key, parts[2], e.line});
  return r;
}

}  // namespace detail

/// Applies `key = value` entries on top of `cfg`. Keys match the long flag names.
inline void apply_entries(ExperimentConfig& cfg, const std::vector<kv::Entry>& entries) {
  for (const kv::Entry& e : entries) {
    if (e.key == "command") cfg.command = e.value;
    else if (e.key == "potential") cfg.potential = e.value;
    else if (e.key == "F") cfg.F = kv::to_double(e);
    else if (e.key == "F-range") cfg.F_range = detail::parse_F_range(e);
    else if (e.key == "N") cfg.N = kv::to_int(e);
    else if (e.key == "N-list") cfg.N_list = detail::parse_int_list(e);
    else if (e.key == "K") cfg.K = kv::to_int(e);
    else if (e.key == "K-rule") cfg.K_rule = e.value;
    else if (e.key == "out") cfg.out = e.value;
    else if (e.key == "seed") {
      const int s = kv::to_int(e);
      if (s < 0) throw ParseError("seed must be nonnegative", e.line);
      cfg.seed = static_cast<unsigned>(s);
    } else throw ParseError("unknown key '" + e.key + "'", e.line);
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg;
  apply_entries(cfg, kv::parse_file(path));
  return cfg;
}

/// Built-in name, or a potential file.
inline EAMPotential resolve_potential(const std::string& spec) {
  if (std::filesystem::is_regular_file(spec)) return make_potential(load_potential_file(spec));
  if (auto p = builtin::by_name(spec)) return *p;
  throw ParseError("potential '" + spec + "' is neither a readable file nor a built-in name", 0);
}

inline std::string default_potential_for(const std::string& command) {
  return command == "remark44" ? "remark44" : "default";
}

inline std::vector<int> N_values(const ExperimentConfig& cfg) {
  if (!cfg.N_list.empty()) return cfg.N_list;
  if (cfg.N) return {*cfg.N};
  const std::string& c = cfg.command;
  if (c == "validate") return {16};
  if (c == "spectrum") return {8};
  if (c == "critical-strain") return {32, 64, 128, 256, 512};
  if (c == "remark44") return {256};
  return {64, 128, 256, 512, 1024};
}

inline KRule K_rule_of(const ExperimentConfig& cfg) {
  if (cfg.K) return fixed_K(*cfg.K);
  if (cfg.K_rule.empty()) return fixed_K(8);
  const auto colon = cfg.K_rule.find(':');
  const std::string kind = cfg.K_rule.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : cfg.K_rule.substr(colon + 1);
  kv::Entry e{"K-rule", arg, 0};
  if (kind == "fixed") return fixed_K(kv::to_int(e));
  if (kind == "power") return power_K(kv::to_double(e));
  throw ParseError("K-rule must be fixed:<K> or power:<theta>, got '" + cfg.K_rule + "'", 0);
}

/// K values used by the remark44 command.
inline std::vector<int> remark44_K_values(const ExperimentConfig& cfg) {
  if (cfg.K) return {*cfg.K};
  return {8, 16, 32, 64};
}

inline bool command_uses_region(const std::string& c) {
  return c == "validate" || c == "critical-strain" || c == "converge" || c == "consistency" ||
         c == "remark44";
}

/// Throws ParseError on an invalid configuration.
inline void validate_config(const ExperimentConfig& cfg) {
  if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end())
    throw ParseError("unknown command '" + cfg.command + "'", 0);
  if (cfg.F && !(*cfg.F > 0.0)) throw ParseError("F must be positive", 0);
  if (cfg.F_range) {
    const FRange& r = *cfg.F_range;
    if (!(r.lo > 0.0) || !(r.hi > r.lo)) throw ParseError("F-range needs 0 < lo < hi", 0);
    if (r.count < 1) throw ParseError("F-range count must be >= 1", 0);
  }
  const std::vector<int> Ns = N_values(cfg);
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 4) throw ParseError("N must be >= 4, got " + std::to_string(Ns[i]), 0);
    if (i > 0 && Ns[i] <= Ns[i - 1]) throw ParseError("N-list must be strictly increasing", 0);
  }
  if (command_uses_region(cfg.command)) {
    const KRule rule = K_rule_of(cfg);
    for (int N : Ns) {
      std::vector<int> Ks = cfg.command == "remark44" ? remark44_K_values(cfg) : std::vector<int>{rule(N)};
      for (int K : Ks)
        if (K < 0 || K >= N - 5)
          throw ParseError("need 0 <= K < N - 5, got N=" + std::to_string(N) + ", K=" + std::to_string(K), 0);
    }
  }
  if ((cfg.command == "converge" || cfg.command == "consistency") && Ns.size() < 2)
    throw ParseError(cfg.command + " needs at least two N values", 0);
  resolve_potential(cfg.potential.empty() ? default_potential_for(cfg.command) : cfg.potential);
}

struct CheckResult {
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

struct RunResult {
  int status = 0;  ///< 0 all checks pass, 1 a check failed, 3 numerical failure
  std::vector<CheckResult> checks;
  std::vector<std::filesystem::path> files;
  std::string error;
};

namespace detail {

class Runner {
public:
  Runner(const ExperimentConfig& cfg, std::ostream& log)
      : cfg_(cfg), log_(log),
        pot_(resolve_potential(cfg.potential.empty() ? default_potential_for(cfg.command) : cfg.potential)),
        out_(cfg.out) {}

  RunResult run() {
    const std::string& c = cfg_.command;
    if (c == "validate") validate();
    else if (c == "spectrum") spectrum();
    else if (c == "critical-strain") critical();
    else if (c == "converge") converge();
    else if (c == "consistency") consistency();
    else if (c == "remark44") remark44();
    for (const auto& [path, content] : pending_) {
      csv::write_atomic(path, content);
      res_.files.push_back(path);
    }
    for (const CheckResult& ch : res_.checks)
      if (!ch.passed) res_.status = 1;
    return res_;
  }

private:
  std::vector<double> F_values(double fallback) const {
    if (cfg_.F_range) return cfg_.F_range->points();
    if (cfg_.F) return {*cfg_.F};
    return {fallback};
  }

  void check(const std::string& name, double value, double tol, bool passed) {
    res_.checks.push_back({name, value, tol, passed});
    char buf[256];
    std::snprintf(buf, sizeof buf, "[%s] %s: %.3e (tolerance %.1e)", passed ? "PASS" : "FAIL",
                  name.c_str(), value, tol);
    log_ << buf << '\n';
  }

  void check_le(const std::string& name, double value, double tol) { check(name, value, tol, value <= tol); }

  void emit(const std::string& file, const std::string& content) {
    pending_.push_back({out_ / file, content});
  }

  void validate() {
    const std::vector<double> probe{0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4};
    const DerivativeReport dr = validate_derivatives(pot_, probe);
    check_le("potential derivatives (" + dr.worst + ")", dr.max_deviation(), 1e-6);

    csv::Table assumptions({"F", "a1_holds", "a2_holds", "a3_holds", "a2_value", "a3_value"});
    const std::vector<double> Fs = F_values(1.0);
    for (double F : Fs) {
      const AssumptionReport a = check_assumptions(pot_, F);
      assumptions.add({F, int(a.a1_holds), int(a.a2_holds), int(a.a3_holds), a.a2_value, a.a3_value});
    }
    emit("assumptions.csv", assumptions.str());

    std::mt19937_64 rng(cfg_.seed);
    std::uniform_real_distribution<double> Fdist(0.95, 1.15);
    const KRule rule = K_rule_of(cfg_);
    double ghost = 0.0, grad = 0.0, hess = 0.0, spec = 0.0;
    std::array<double, 4> ident{};
    for (int N : N_values(cfg_)) {
      const ChainGrid grid(N);
      const RegionDecomposition region(N, rule(N));
      for (double F : Fs) {
        ghost = std::max(ghost, ghost_force(ModelKind::QNL, &region, pot_, grid, F).relative());
        const SpectrumReport fs = fourier_spectrum(pot_, F, N);
        const double num = stability_spectrum(ModelKind::Atomistic, nullptr, pot_, F, N).front();
        spec = std::max(spec, std::abs(num - fs.lambda_min) / std::max(std::abs(fs.lambda_min), 1e-300));
      }
      for (ModelKind m : {ModelKind::Atomistic, ModelKind::QNL, ModelKind::QCL}) {
        const RegionDecomposition* r = m == ModelKind::QNL ? &region : nullptr;
        for (int t = 0; t < 50; ++t) {
          const double F = Fdist(rng);
          const Deformation y{F, random_displacement(grid, 0.02, rng)};
          const PeriodicField w = random_displacement(grid, 1.0, rng);
          grad = std::max(grad, fd_gradient_error(m, r, pot_, y, w));
          hess = std::max(hess, fd_hessian_error(m, r, pot_, F, w));
        }
      }
      for (int t = 0; t < 200; ++t) {
        std::normal_distribution<double> nd;
        const PeriodicField u =
            PeriodicField::from_sites(grid, [&](int) { return nd(rng); }, FieldKind::Displacement);
        const auto res = identity_residuals(u);
        for (int k = 0; k < 4; ++k) ident[k] = std::max(ident[k], res[k]);
      }
    }
    check_le("ghost force at y_F (QNL, relative)", ghost, 1e-12);
    check_le("gradient vs energy finite differences", grad, 1e-6);
    check_le("hessian vs gradient finite differences", hess, 1e-5);
    check_le("difference identities", *std::max_element(ident.begin(), ident.end()), 1e-12);
    check_le("atomistic spectrum vs Fourier cubic", spec, 1e-9);

    csv::Table t({"check", "value", "tolerance", "passed"});
    for (const CheckResult& c : res_.checks) t.add({c.name, c.value, c.tolerance, int(c.passed)});
    emit("validate.csv", t.str());
  }

  void spectrum() {
    csv::Table modes({"F", "N", "k", "s_k", "lambda_k"});
    csv::Table summary({"F", "N", "lambda_min_fourier", "argmin_k", "minimizer_is_k1",
                        "lambda_min_atomistic_numeric"});
    double worst = 0.0;
    for (double F : F_values(1.0))
      for (int N : N_values(cfg_)) {
        const SpectrumReport rep = fourier_spectrum(pot_, F, N);
        for (const SpectrumEntry& m : rep.modes) modes.add({F, N, m.k, m.s, m.lambda});
        const double num = stability_spectrum(ModelKind::Atomistic, nullptr, pot_, F, N).front();
        summary.add({F, N, rep.lambda_min, rep.argmin_k, int(rep.minimizer_is_k1), num});
        worst = std::max(worst, std::abs(num - rep.lambda_min) / std::max(std::abs(rep.lambda_min), 1e-300));
        if (!rep.minimizer_is_k1)
          log_ << "note: F=" << F << ", N=" << N << ": minimizing mode is k=" << rep.argmin_k << '\n';
      }
    check_le("atomistic spectrum vs Fourier cubic", worst, 1e-9);
    emit("spectrum.csv", modes.str());
    emit("spectrum_summary.csv", summary.str());
  }

  void critical() {
    const FRange br = cfg_.F_range.value_or(FRange{1.0, 1.15, 2});
    const KRule rule = K_rule_of(cfg_);
    csv::Table t({"model", "N", "K", "F_star"});
    csv::Table gap({"N", "K", "epsilon", "F_star_atomistic", "F_star_qnl", "gap"});
    std::vector<double> eps, gaps;
    double qcl_dev = 0.0;
    for (int N : N_values(cfg_)) {
      const int K = rule(N);
      const RegionDecomposition region(N, K);
      auto find = [&](ModelKind m, const RegionDecomposition* r) {
        try {
          return critical_strain(m, r, pot_, N, br.lo, br.hi);
        } catch (const BracketError& e) {
          throw BracketError(std::string(to_string(m)) + ", N=" + std::to_string(N) + ": " + e.what());
        }
      };
      const double fa = find(ModelKind::Atomistic, nullptr);
      const double fq = find(ModelKind::QNL, &region);
      const double fc = find(ModelKind::QCL, nullptr);
      t.add({std::string("atomistic"), N, K, fa});
      t.add({std::string("qnl"), N, K, fq});
      t.add({std::string("qcl"), N, K, fc});
      gap.add({N, K, 1.0 / N, fa, fq, std::abs(fa - fq)});
      eps.push_back(1.0 / N);
      gaps.push_back(std::abs(fa - fq));
      // F* of QCL is the root of A_F
      const double a_lo = coefficients(pot_, fc - 1e-9).A, a_hi = coefficients(pot_, fc + 1e-9).A;
      if (a_lo * a_hi > 0.0) qcl_dev = 1.0;
    }
    check_le("QCL F* within 1e-9 of the root of A_F", qcl_dev, 0.0);
    emit("critical_strain.csv", t.str());
    if (eps.size() >= 2) {
      const double slope = loglog_slope(eps, gaps);
      log_ << "gap slope (log|F*_a - F*_qnl| vs log eps): " << slope << '\n';
      csv::Table fit({"quantity", "slope"});
      fit.add({std::string("gap"), slope});
      emit("critical_strain_gap.csv", gap.str());
      emit("critical_strain_fit.csv", fit.str());
    }
  }

  ConvergenceStudy study() {
    const double F = F_values(1.0).front();
    const std::vector<int> Ns = N_values(cfg_);
    return convergence_study(pot_, F, [](ChainGrid g) { return DeadLoad::cosine(g); }, K_rule_of(cfg_), Ns);
  }

  void converge() {
    const ConvergenceStudy st = study();
    csv::Table t({"N", "K", "epsilon", "error_H1", "consistency_negnorm", "D3_continuum",
                  "D2_interface_max", "A_F", "lambda_min_qnl", "error_bound_A_F",
                  "error_equation_residual", "error_slope_all", "error_slope_tail",
                  "negnorm_slope_all", "negnorm_slope_tail"});
    csv::Table timing({"N", "runtime_ms"});
    double bound_violation = 0.0, eqres = 0.0;
    for (const ConvergenceRecord& r : st.records) {
      const double bound = r.consistency_negnorm / r.A_F;
      t.add({r.N, r.K, r.epsilon, r.error_H1, r.consistency_negnorm, r.D3_continuum,
             r.D2_interface_max, r.A_F, r.lambda_min_qnl, bound, r.error_equation_residual,
             st.error_rate.slope_all, st.error_rate.slope_tail, st.negnorm_rate.slope_all,
             st.negnorm_rate.slope_tail});
      timing.add({r.N, r.runtime_ms});
      bound_violation = std::max(bound_violation, r.error_H1 / (bound * (1.0 + 1e-6)));
      eqres = std::max(eqres, r.error_equation_residual);
    }
    check_le("error_H1 / (negnorm / A_F)", bound_violation, 1.0);
    check_le("error equation residual", eqres, 1e-10);
    log_ << "error slope: all points " << st.error_rate.slope_all << ", tail " << st.error_rate.slope_tail << '\n';
    emit("converge.csv", t.str());
    emit("converge_timing.csv", timing.str());
    emit("converge.gp",
         "# gnuplot: log-log error and consistency residual versus eps\n"
         "set datafile separator ','\n"
         "set logscale xy\n"
         "set key top left\n"
         "set xlabel 'eps = 1/N'\n"
         "set ylabel 'norm'\n"
         "set terminal pngcairo size 800,600\n"
         "set output 'converge.png'\n"
         "plot 'converge.csv' using 3:4 skip 1 with linespoints title '||Du_a - Du_qnl||', \\\n"
         "     'converge.csv' using 3:5 skip 1 with linespoints title 'negative norm of T', \\\n"
         "     'converge.csv' using 3:($3**1.5) skip 1 with lines dashtype 2 title 'eps^{3/2}'\n");
  }

  void consistency() {
    const ConvergenceStudy st = study();
    csv::Table t({"N", "K", "epsilon", "consistency_negnorm", "negnorm_interface", "negnorm_continuum",
                  "D3_continuum", "D2_interface_max", "M_C", "M_I", "negnorm_slope_all",
                  "negnorm_slope_tail"});
    double mc_lo = INFINITY, mc_hi = 0.0, mi_lo = INFINITY, mi_hi = 0.0;
    for (const ConvergenceRecord& r : st.records) {
      t.add({r.N, r.K, r.epsilon, r.consistency_negnorm, r.negnorm_interface, r.negnorm_continuum,
             r.D3_continuum, r.D2_interface_max, r.M_C, r.M_I, st.negnorm_rate.slope_all,
             st.negnorm_rate.slope_tail});
      mc_lo = std::min(mc_lo, r.M_C);
      mc_hi = std::max(mc_hi, r.M_C);
      mi_lo = std::min(mi_lo, r.M_I);
      mi_hi = std::max(mi_hi, r.M_I);
    }
    check("M_C max/min across N", mc_hi / mc_lo, 2.0, mc_hi / mc_lo < 2.0);
    check("M_I max/min across N", mi_hi / mi_lo, 2.0, mi_hi / mi_lo < 2.0);
    emit("consistency.csv", t.str());
  }

  void remark44() {
    const double F = F_values(1.0).front();
    const UniformState s = uniform_state(pot_, F);
    const double target = s.phi2_F + 2.0 * s.G1 * s.rho2_F;
    const StabilityCoefficients c = coefficients(pot_, F);
    csv::Table t({"N", "K", "F", "phi2_plus_2G1rho2", "rq_atomistic_u_tilde", "lambda_min_qcl", "A_F",
                  "rq_qnl_u_hat", "rq_qnl_u_hat_minus_target", "decay_slope"});
    struct Row {
      int N, K;
      double rqa, lqcl, rqq;
    };
    std::vector<Row> rows;
    double worst = 0.0;
    bool below = true;
    for (int N : N_values(cfg_)) {
      const ChainGrid grid(N);
      const double lqcl = stability_spectrum(ModelKind::QCL, nullptr, pot_, F, N).front();
      const SymmetricBandedOperator Ha = hessian(ModelKind::Atomistic, nullptr, pot_, grid, F);
      for (int K : remark44_K_values(cfg_)) {
        const auto [ut, uh] = remark_test_functions(N, K);
        const RegionDecomposition region(N, K);
        const double rqa = rayleigh_quotient(Ha, ut);
        const double rqq = rayleigh_quotient(hessian(ModelKind::QNL, &region, pot_, grid, F), uh);
        rows.push_back({N, K, rqa, lqcl, rqq});
        worst = std::max(worst, std::abs(rqa - target) / std::max(std::abs(target), 1e-300));
        below = below && rqa < lqcl;
      }
    }
    std::vector<double> Ks, ds;
    for (const Row& r : rows)
      if (r.N == rows.front().N) {
        Ks.push_back(r.K);
        ds.push_back(std::abs(r.rqq - target));
      }
    const double slope = Ks.size() >= 2 ? -loglog_slope(Ks, ds) : NAN;
    for (const Row& r : rows)
      t.add({r.N, r.K, F, target, r.rqa, r.lqcl, c.A, r.rqq, r.rqq - target, slope});
    check_le("atomistic Rayleigh quotient on u_tilde vs phi'' + 2 G' rho''", worst, 1e-10);
    check("atomistic quotient below QCL lambda_min", below ? 0.0 : 1.0, 0.0, below);
    if (Ks.size() >= 2) log_ << "QNL quotient on u_hat: decay exponent in K = " << slope << '\n';
    emit("remark44.csv", t.str());
  }

  const ExperimentConfig& cfg_;
  std::ostream& log_;
  EAMPotential pot_;
  std::filesystem::path out_;
  RunResult res_;
  std::vector<std::pair<std::filesystem::path, std::string>> pending_;
};

}  // namespace detail

/// Runs one configured command. Configuration problems throw ParseError;
/// numerical failures are reported through status 3.
inline RunResult run(const ExperimentConfig& cfg, std::ostream& log) {
  validate_config(cfg);
  try {
    return detail::Runner(cfg, log).run();
  } catch (const NumericalFailure& e) {
    return {3, {}, {}, cfg.command + ": " + e.what()};
  } catch (const NotPositiveDefinite& e) {
    return {3, {}, {}, cfg.command + ": " + e.what()};
  } catch (const BracketError& e) {
    return {3, {}, {}, cfg.command + ": " + e.what()};
  }
}

}  // namespace qnl_eam
