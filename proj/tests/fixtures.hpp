// SPDX-License-Identifier: Apache-2.0
//
// Shared scene builders for tests: the three-RU reference topology at
// configurable array/waveform sizes, plus randomized small scenes.
#pragma once

#include <random>
#include <vector>

#include "cfsense/forward_model.hpp"
#include "cfsense/scene.hpp"
#include "cfsense/waveform.hpp"

namespace testing {

struct Setup {
  cfsense::Scene scene;
  cfsense::IlluminationSchedule schedule;
  std::vector<cfsense::BeamCodebook> codebooks;
  cfsense::TxPlan plan;
};

inline cfsense::RuConfig make_ru(const cfsense::Vec2& pos, const cfsense::Vec2& toward,
                                 int m, int z, double power) {
  cfsense::RuConfig ru;
  ru.position = pos;
  ru.boresight = (toward - pos).normalized();
  ru.num_antennas = m;
  ru.num_beams = z;
  ru.tx_power_w = power;
  return ru;
}

/// Reference topology: RUs at (0,0), (100,0), (50,86) facing their centroid,
/// grid over (25,20)-(75,70), round-robin illumination, equal-power beams.
inline Setup reference_setup(int m = 4, int z = 2, int n = 4, int grid_n = 4,
                             double tx_power = 1e10, double noise_power = 1.0) {
  Setup s;
  const cfsense::Vec2 centroid{50.0, 86.0 / 3.0 + 0.0};  // mean of the three RUs
  s.scene.rus = {make_ru({0.0, 0.0}, centroid, m, z, tx_power),
                 make_ru({100.0, 0.0}, centroid, m, z, tx_power),
                 make_ru({50.0, 86.0}, centroid, m, z, tx_power)};
  s.scene.grid = cfsense::make_grid({25.0, 20.0}, {75.0, 70.0}, grid_n, grid_n);
  s.scene.carrier_freq_hz = 10e9;
  s.scene.num_subcarriers = n;
  s.scene.subcarrier_spacing_hz = 10e6;
  s.scene.noise_power_w = noise_power;
  s.scene.num_slots = 3;

  s.schedule = cfsense::make_schedule(cfsense::ScheduleKind::kRoundRobin, 3, 3);
  for (const auto& ru : s.scene.rus) {
    s.codebooks.push_back(cfsense::build_codebook(ru.num_antennas, ru.num_beams));
  }
  std::mt19937_64 rng(0);
  s.plan.resize(3);
  for (int slot = 0; slot < 3; ++slot) {
    s.plan[slot].resize(3);
    for (int i : s.schedule.slots[slot].transmitters) {
      s.plan[slot][i] = cfsense::make_weights(cfsense::BfPattern::kEqual, z, tx_power,
                                              n, rng);
    }
  }
  return s;
}

/// Randomized small scene: 2-3 RUs at random positions, tiny arrays and
/// grids; targets land on distinct grid points.
inline Setup random_setup(std::mt19937_64& rng, int num_targets) {
  auto unif = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto unif_int = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  Setup s;
  const int k = unif_int(2, 3);
  const int m = unif_int(2, 4);
  const int z = std::max(1, m - unif_int(1, m - 1));
  const double power = std::pow(10.0, unif(8.0, 11.0));
  const cfsense::Vec2 center{unif(-20.0, 20.0), unif(-20.0, 20.0)};
  for (int i = 0; i < k; ++i) {
    const double angle = 2.0 * M_PI * i / k + unif(0.0, 0.5);
    const double radius = unif(60.0, 120.0);
    const cfsense::Vec2 pos = center + radius * cfsense::Vec2{std::cos(angle), std::sin(angle)};
    s.scene.rus.push_back(make_ru(pos, center, m, z, power));
  }
  const double half_w = unif(10.0, 30.0);
  const double half_h = unif(10.0, 30.0);
  s.scene.grid = cfsense::make_grid(center - cfsense::Vec2{half_w, half_h},
                                    center + cfsense::Vec2{half_w, half_h},
                                    unif_int(3, 5), unif_int(3, 5));
  s.scene.carrier_freq_hz = unif(2e9, 12e9);
  s.scene.num_subcarriers = unif_int(2, 5);
  s.scene.subcarrier_spacing_hz = unif(2e6, 20e6);
  s.scene.noise_power_w = 1.0;
  s.scene.num_slots = k;

  std::vector<int> pool(s.scene.grid.points.size());
  std::iota(pool.begin(), pool.end(), 0);
  for (int t = 0; t < num_targets; ++t) {
    std::uniform_int_distribution<int> pick(t, static_cast<int>(pool.size()) - 1);
    std::swap(pool[t], pool[pick(rng)]);
    s.scene.targets.push_back(
        {s.scene.grid.points[static_cast<std::size_t>(pool[t])], unif(0.5, 100.0)});
  }

  s.schedule = cfsense::make_schedule(cfsense::ScheduleKind::kRoundRobin, k, k);
  for (const auto& ru : s.scene.rus) {
    s.codebooks.push_back(cfsense::build_codebook(ru.num_antennas, ru.num_beams));
  }
  s.plan.resize(s.schedule.slots.size());
  for (std::size_t slot = 0; slot < s.plan.size(); ++slot) {
    s.plan[slot].resize(s.scene.rus.size());
    for (int i : s.schedule.slots[slot].transmitters) {
      s.plan[slot][i] = cfsense::make_weights(cfsense::BfPattern::kEqual,
                                              s.scene.rus[i].num_beams, power,
                                              s.scene.num_subcarriers, rng);
    }
  }
  return s;
}

}  // namespace testing
