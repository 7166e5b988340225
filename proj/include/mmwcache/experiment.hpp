#pragma once

#include "mmwcache/analytic.hpp"
#include "mmwcache/simulator.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mmwcache {

// Sweepable parameters: "lambda_u_per_km2", "d_l_m", "rate_bps", "zipf_epsilon".
struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct ExperimentSpec {
  NetworkConfig config;
  ContentLibrary library;
  AnalyticOptions analytic;
  std::vector<SweepAxis> sweep;  // at most two axes
  std::vector<System> systems = {System::S1, System::S2};
  long trials = 0;
  uint64_t base_seed = 1;
  std::string output = "experiment.csv";
};

// Loads and validates a full experiment spec (requires "sweep" and "trials";
// model parameters default to the reference setup). Throws with field-level
// messages.
ExperimentSpec load_spec(const std::string& path);
void write_spec(const ExperimentSpec& spec, const std::string& path);

// Loads just the model part (config/library/analytic sections, all fields
// optional) for single-point commands.
struct ModelConfig {
  NetworkConfig config;
  ContentLibrary library;
  AnalyticOptions analytic;
};
ModelConfig load_model_config(const std::string& path);

// Applies one sweep-axis value onto a config/library pair.
void apply_axis(const std::string& name, double value, NetworkConfig& cfg, ContentLibrary& lib);

// Runs every (sweep point x system), writing one CSV row each (flushed as
// produced; a failing point yields a row with status=failed and processing
// continues). Returns the number of failed points.
int run_experiment(const ExperimentSpec& spec);

// S-1/S-2 ratio summary of a CSV produced by run_experiment.
std::string compare_report(const std::string& csv_path);

std::string csv_header(const ExperimentSpec& spec);

}  // namespace mmwcache
