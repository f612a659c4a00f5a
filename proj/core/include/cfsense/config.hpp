// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: a flat key-value file with one section per
// subsystem (grammar documented in the README). Every key is optional and
// defaults to the reference three-RU topology; unknown keys are errors.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfsense/detection.hpp"
#include "cfsense/estimators.hpp"
#include "cfsense/forward_model.hpp"
#include "cfsense/scene.hpp"
#include "cfsense/waveform.hpp"

namespace cfsense {

enum class SolverKind { kSbl, kOmp };
enum class DetectorKind { kTopL, kCfar };
enum class TargetMode { kOnGrid, kOffGrid };

std::string_view to_string(SolverKind k);
std::string_view to_string(DetectorKind k);
std::string_view to_string(TargetMode m);
std::string_view to_string(BfPattern p);
std::string_view to_string(ScheduleKind s);

struct ExperimentConfig {
  // [scene]
  std::vector<Vec2> ru_positions{{0.0, 0.0}, {100.0, 0.0}, {50.0, 86.0}};
  std::vector<Vec2> ru_boresights;  // empty: each RU faces the RU centroid
  std::vector<int> ru_antennas{16, 16, 16};
  std::vector<int> ru_beams{10, 10, 10};
  double carrier_freq_hz = 10e9;
  int num_subcarriers = 16;
  double subcarrier_spacing_hz = 10e6;  // N * df = 160 MHz
  int num_slots = 3;
  Vec2 grid_min{25.0, 20.0};
  Vec2 grid_max{75.0, 70.0};
  int grid_nx = 20;
  int grid_ny = 20;
  Vec2 target_region_min{25.0, 20.0};
  Vec2 target_region_max{75.0, 70.0};
  double target_rcs = 100.0;  // linear

  // [waveform]
  BfPattern bf_pattern = BfPattern::kEqual;

  // [forward_model]
  ScheduleKind schedule = ScheduleKind::kRoundRobin;
  std::vector<IlluminationSchedule::Slot> custom_slots;

  // [estimators]
  std::vector<SolverKind> solvers{SolverKind::kSbl, SolverKind::kOmp};
  int sbl_max_iters = 200;
  double sbl_tol = 1e-4;

  // [detection]
  DetectorKind detector = DetectorKind::kTopL;
  double cfar_pfa = 1e-5;
  int cfar_guard = 1;
  int cfar_train = 2;

  // [pep]
  int pep_order = 0;  // 0 = off

  // [harness]
  TargetMode target_mode = TargetMode::kOnGrid;
  int num_targets_min = 3;
  int num_targets_max = 7;
  std::vector<double> snr_sweep_db{100.0, 105.0, 110.0, 115.0, 120.0};
  int trials = 200;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  int threads = 0;  // 0 = hardware concurrency; never affects results
  std::optional<double> abs_tx_power_w;    // absolute-power escape hatch
  std::optional<double> abs_noise_power_w;

  int num_rus() const { return static_cast<int>(ru_positions.size()); }
  GridSpec make_grid_spec() const;
  /// RU list with the given per-RU transmit power; defaults boresights to
  /// point at the centroid of all RU positions.
  std::vector<RuConfig> make_rus(double tx_power_w) const;

  void validate() const;  // throws ConfigError naming the offending key
  /// Canonical echo of every effective value (threads excluded: it is a
  /// runtime knob that must not change results or provenance).
  std::string echo() const;
  std::uint64_t hash() const;
};

/// Parses and validates a config file. Missing file -> IoError; malformed
/// content or invariant violations -> ConfigError.
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Same grammar from an in-memory string (used by tests).
ExperimentConfig parse_config_text(std::string_view text);

}  // namespace cfsense
