// Command-line front end: caching optimization, analytic evaluation, Monte
// Carlo simulation, parameter sweeps and S-1/S-2 comparison reports.

#include "mmwcache/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace mmwcache;

System parse_system(const std::string& name) {
  if (name == "S-1") return System::S1;
  if (name == "S-2") return System::S2;
  throw CLI::ValidationError("--system", "must be 'S-1' or 'S-2'");
}

void print_policy(std::ostream& os, const CachingPolicy& policy) {
  os << "# file  q\n";
  for (size_t i = 0; i < policy.q.size(); ++i)
    if (policy.q[i] > 0) os << i + 1 << "  " << policy.q[i] << "\n";
  double sum = 0;
  for (double q : policy.q) sum += q;
  os << "# sum(q) = " << sum;
  if (policy.mu_star) os << ", mu* = " << *policy.mu_star;
  os << "\n";
}

int cmd_optimize(const std::string& config_path, bool baseline, const std::string& out_path) {
  const ModelConfig mc = load_model_config(config_path);
  CachingPolicy policy;
  if (baseline) {
    policy = baseline_hitmax_caching(mc.library, mc.config);
  } else {
    const DerivedConstants dc = derive_constants(mc.config, mc.library);
    policy = optimize_caching(placement_distances(dc, mc.config, mc.library), mc.library,
                              mc.config);
  }
  if (out_path.empty() || out_path == "-") {
    print_policy(std::cout, policy);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    print_policy(out, policy);
  }
  return 0;
}

int cmd_analytic(const std::string& config_path, const std::string& system_name) {
  const ModelConfig mc = load_model_config(config_path);
  const System system = parse_system(system_name);
  const DerivedConstants dc = derive_constants(mc.config, mc.library);
  CachingPolicy policy;
  std::vector<double> radii;
  if (system == System::S1) {
    policy = optimize_caching(placement_distances(dc, mc.config, mc.library), mc.library,
                              mc.config);
    radii = association_thresholds(policy, dc, mc.library, mc.config).search_radius;
  } else {
    policy = baseline_hitmax_caching(mc.library, mc.config);
    radii.assign(mc.library.n_files, mc.config.d_r);
  }
  const AnalyticReport rep = overall_report(policy, radii, mc.config, mc.library, mc.analytic);
  std::printf("system      %s\n", system_name.c_str());
  std::printf("p_s         %.6f\n", rep.p_s);
  std::printf("p_d         %.6f\n", rep.p_d);
  std::printf("op          %.6f\n", rep.op);
  std::printf("sp_d2d      %.6f\n", rep.sp_d2d);
  std::printf("sp_cell     %.6f\n", rep.sp_cell);
  std::printf("sp_total    %.6f\n", rep.sp_total);
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& system_name, long trials,
                 uint64_t seed) {
  const ModelConfig mc = load_model_config(config_path);
  const System system = parse_system(system_name);
  CachingPolicy policy;
  if (system == System::S1) {
    const DerivedConstants dc = derive_constants(mc.config, mc.library);
    policy = optimize_caching(placement_distances(dc, mc.config, mc.library), mc.library,
                              mc.config);
  } else {
    policy = baseline_hitmax_caching(mc.library, mc.config);
  }
  const MetricsReport rep = run_campaign(mc.config, mc.library, policy, system, trials, seed);
  std::printf("system      %s\n", system_name.c_str());
  std::printf("trials      %ld\n", rep.trials);
  std::printf("sp          %.6f +- %.6f\n", rep.sp.value, rep.sp.ci);
  std::printf("op_d        %.6f +- %.6f\n", rep.op_d.value, rep.op_d.ci);
  std::printf("sop_d       %.6f +- %.6f\n", rep.sop_d.value, rep.sop_d.ci);
  std::printf("self_hit    %.6f +- %.6f\n", rep.self_hit.value, rep.self_hit.ci);
  if (rep.ee_total)
    std::printf("ee_total    %.6g bit/J\n", *rep.ee_total);
  else
    std::printf("ee_total    n/a\n");
  if (rep.ee_d2d)
    std::printf("ee_d2d      %.6g bit/J\n", *rep.ee_d2d);
  else
    std::printf("ee_d2d      n/a\n");
  return 0;
}

int cmd_sweep(const std::string& config_path, long trials_override, long seed_override,
              const std::string& out_override) {
  ExperimentSpec spec = load_spec(config_path);
  if (trials_override > 0) spec.trials = trials_override;
  if (seed_override >= 0) spec.base_seed = static_cast<uint64_t>(seed_override);
  if (!out_override.empty()) spec.output = out_override;
  const int failures = run_experiment(spec);
  if (failures) std::cerr << failures << " sweep point(s) failed\n";
  std::cout << "wrote " << spec.output << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache-enabled mmWave D2D network simulator and optimizer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string system_name = "S-1";
  std::string out_path;
  std::string csv_path;
  bool baseline = false;
  long trials = 10000;
  long seed = 1;
  long sweep_trials = -1;
  long sweep_seed = -1;

  CLI::App* optimize = app.add_subcommand("optimize", "Compute caching probabilities");
  optimize->add_option("--config", config_path, "model config (JSON)")->required();
  optimize->add_flag("--baseline", baseline, "hit-maximizing baseline instead of the QoS-aware policy");
  optimize->add_option("--out", out_path, "output file ('-' for stdout)");

  CLI::App* analytic = app.add_subcommand("analytic", "Evaluate the closed-form/quadrature metrics");
  analytic->add_option("--config", config_path, "model config (JSON)")->required();
  analytic->add_option("--system", system_name, "S-1 or S-2");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo metrics at a single point");
  simulate->add_option("--config", config_path, "model config (JSON)")->required();
  simulate->add_option("--system", system_name, "S-1 or S-2");
  simulate->add_option("--trials", trials, "number of independent trials");
  simulate->add_option("--seed", seed, "base seed");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  sweep->add_option("--config", config_path, "experiment spec (JSON)")->required();
  sweep->add_option("--trials", sweep_trials, "override trials per point");
  sweep->add_option("--seed", sweep_seed, "override base seed");
  sweep->add_option("--out", out_path, "override output CSV path");

  CLI::App* compare = app.add_subcommand("compare", "S-1/S-2 ratio report from a sweep CSV");
  compare->add_option("csv", csv_path, "CSV produced by 'sweep'")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (optimize->parsed()) return cmd_optimize(config_path, baseline, out_path);
    if (analytic->parsed()) return cmd_analytic(config_path, system_name);
    if (simulate->parsed())
      return cmd_simulate(config_path, system_name, trials, static_cast<uint64_t>(seed));
    if (sweep->parsed()) return cmd_sweep(config_path, sweep_trials, sweep_seed, out_path);
    if (compare->parsed()) {
      std::cout << mmwcache::compare_report(csv_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
