// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte Carlo execution: single trials, SNR sweeps and result
// emission (CSV + run manifest). Per-trial RNG streams derive from
// (seed, SNR index, trial id), so outputs are byte-identical across runs
// and across worker counts.
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cfsense/config.hpp"
#include "cfsense/detection.hpp"
#include "cfsense/scene.hpp"

namespace cfsense {

struct SolverOutcome {
  SolverKind solver = SolverKind::kSbl;
  DetectionResult detection;
  MetricReport metrics;
  bool failed = false;
  std::string error;
};

struct TrialRecord {
  int snr_index = 0;
  double snr_db = 0.0;
  int trial_id = 0;
  int num_targets = 0;
  std::vector<Vec2> true_positions;
  std::vector<int> true_indices;   // empty in off-grid mode
  double fading_power = 0.0;       // mean |rho_l|^2 of the draw
  std::vector<SolverOutcome> outcomes;
  double union_bound = 0.0;        // NaN when pep is off
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;        // manifest only, never in the CSVs
};

/// Maps a sweep point to (per-RU transmit power, noise power): N0 = 1 and
/// 10*log10(P/(N*N0)) = snr_db, unless the config pins absolute powers.
std::pair<double, double> snr_to_power(double snr_db, const ExperimentConfig& config);

/// The deterministic pre-solver part of a trial, with the same RNG
/// consumption as run_trial: drawn scene, schedule, assembled dictionary and
/// synthesized observation. Backs the CLI debug dump and the PEP report.
struct TrialArtifacts {
  Scene scene;
  IlluminationSchedule schedule;
  SensingMatrix sensing;
  Observation observation;
  TrialRecord record;  // truth fields filled; outcomes empty
};
TrialArtifacts materialize_trial(const ExperimentConfig& config, int snr_index,
                                 int trial_id);

/// One full trial: draws the target count, positions, fading and beams,
/// synthesizes the observation, runs every configured solver + detector and
/// scores it. Solver failures are flagged in the record, never dropped.
TrialRecord run_trial(const ExperimentConfig& config, int snr_index, int trial_id,
                      std::mt19937_64& rng);

struct SweepAggregate {
  double snr_db = 0.0;
  SolverKind solver = SolverKind::kSbl;
  BfPattern bf_pattern = BfPattern::kEqual;
  double mdr = 0.0;
  double far = 0.0;
  double mse_m = 0.0;
  double union_bound = 0.0;
  int trials = 0;
};

struct ResultTable {
  ExperimentConfig config;
  std::vector<SweepAggregate> aggregates;  // (snr, solver) order
  std::vector<TrialRecord> records;        // (snr, trial) order
  double wall_time_s = 0.0;
};

/// Runs trials for every SNR point in parallel workers (num_threads = 0
/// defers to the config, then to hardware concurrency).
ResultTable run_sweep(const ExperimentConfig& config, int num_threads = 0);

/// Writes sweep.csv, trials.csv and meta.json into out_dir.
void emit_results(const ResultTable& table, const std::filesystem::path& out_dir);

}  // namespace cfsense
