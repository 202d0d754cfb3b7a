#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "agc/codes.hpp"
#include "agc/decode.hpp"
#include "agc/straggler.hpp"

namespace agc {

struct ExperimentConfig {
  std::vector<Scheme> schemes;
  std::size_t k = 100;
  std::size_t n = 100;
  std::vector<std::size_t> s_values;
  std::vector<double> delta_values;
  std::vector<DecoderConfig> decoders;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  StragglerModel straggler_model;
  std::string output_path;
};

// One decoder applied to one trial. An iterative decoder with emit_trace
// produces one record per t, labelled "iterative-t<t>".
struct TrialRecord {
  Scheme scheme = Scheme::Frc;
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t s = 0;
  double delta = 0.0;
  std::size_t r = 0;
  std::string decoder;
  double param = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double err_sq = 0.0;
  double err_per_task = 0.0;
  int iterations = 0;
};

struct AggregateRow {
  Scheme scheme = Scheme::Frc;
  std::size_t k = 0;
  std::size_t s = 0;
  double delta = 0.0;
  std::string decoder;
  double mean_err_per_task = 0.0;
  double stderr_err_per_task = 0.0;
  std::size_t trials = 0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;     // ordered by (cell, trial, decoder)
  std::vector<AggregateRow> aggregates;  // ordered by (cell, decoder)
  std::vector<std::string> skipped;      // one reason per infeasible cell
};

inline constexpr std::string_view kRecordHeader =
    "scheme,k,n,s,delta,r,decoder,param,trial,seed,err_sq,err_per_task,iterations";
inline constexpr std::string_view kAggregateHeader = "scheme,k,s,delta,decoder,mean_err_per_task,stderr,trials";

// Throws InfeasibleError for an invalid config (no trials, delta outside
// [0, 1), ...). Cells that a scheme cannot realise are skipped instead.
void check_config(const ExperimentConfig& cfg);

// Runs every (scheme, s, delta) cell for cfg.trials trials. Work is spread
// over `jobs` threads; the output does not depend on `jobs`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 1);

// Seed of trial `trial` in the cell (scheme, s, delta).
std::uint64_t trial_seed(std::uint64_t master_seed, Scheme scheme, std::size_t s, double delta, std::size_t trial);

std::string decoder_label(const DecoderConfig& d);

std::string to_csv(const TrialRecord& rec);
std::string to_csv(const AggregateRow& row);

// Writes records.csv and aggregate.csv into dir, creating it if needed.
void write_results(const ExperimentResult& result, const std::filesystem::path& dir);

// Flat JSON document mirroring ExperimentConfig field names.
ExperimentConfig parse_experiment_config(std::string_view json_text);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

// Built-in presets "fig2", "fig3", "fig4", "fig5".
ExperimentConfig experiment_preset(std::string_view name);

}  // namespace agc
