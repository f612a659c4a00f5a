// SPDX-License-Identifier: Apache-2.0
//
// Physical channel synthesis, network-wide observation stacking and assembly
// of the grid-based sensing matrix.
#pragma once

#include <filesystem>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cfsense/scene.hpp"
#include "cfsense/waveform.hpp"

namespace cfsense {

/// Per-slot partition of the RU index set into transmitters and receivers;
/// no RU transmits and receives in the same slot.
struct IlluminationSchedule {
  struct Slot {
    std::vector<int> transmitters;  // ascending
    std::vector<int> receivers;     // ascending
  };
  std::vector<Slot> slots;

  int num_slots() const { return static_cast<int>(slots.size()); }
};

enum class ScheduleKind { kRoundRobin, kCustom };

/// Round robin: slot s transmits from RU s and receives at all others;
/// requires num_slots == num_rus. Custom slots are validated: disjoint,
/// covering, both sides nonempty.
IlluminationSchedule make_schedule(ScheduleKind kind, int num_rus, int num_slots,
                                   std::vector<IlluminationSchedule::Slot> custom = {});

struct RowBlock {
  int slot = 0;
  int receiver = 0;
  Eigen::Index offset = 0;
  Eigen::Index height = 0;  // N * M_k
};

/// Stacked dictionary: column q is the network response to a unit reflector
/// at grid point q. Row blocks follow the stacking order: slots outer,
/// receivers inner in ascending index order; within a block, subcarrier-major
/// (entry n*M_k + m).
struct SensingMatrix {
  Eigen::MatrixXcd a;
  std::vector<RowBlock> row_blocks;
};

/// Grid- or target-domain fading coefficients with their support.
struct FadingVector {
  Eigen::VectorXcd values;
  std::vector<int> support;
};

struct Observation {
  Eigen::VectorXcd y;
  double noise_power_w = 0.0;
  bool on_grid = false;             // all targets coincide with grid points
  std::vector<Target> targets;      // ground truth used for synthesis
  Eigen::VectorXcd fading;          // drawn rho_l, one per target
  std::vector<int> grid_indices;    // valid when on_grid
};

/// Per-RU per-slot transmit weights; entries for non-transmitting RUs are
/// left empty.
using TxPlan = std::vector<std::vector<TxWeights>>;  // [slot][ru]

Eigen::Index observation_length(const Scene& scene, const IlluminationSchedule& schedule);
std::vector<RowBlock> make_row_blocks(const Scene& scene,
                                      const IlluminationSchedule& schedule);

/// Brute-force channel matrix H_{i,k}[n] (subcarrier n is 0-based), the sum
/// of one rank-1 term per target. Used as the oracle path in tests.
Eigen::MatrixXcd channel_matrix(int illuminator, int receiver, int subcarrier,
                                const Scene& scene, const Eigen::VectorXcd& fading);

/// Response of a unit reflector at `point` for one (illuminator, receiver,
/// slot) triple, stacked over subcarriers: entry n*M_k + m equals
/// sqrt(D) * a_k(theta)[m] * b * exp(-j*2*pi*tau*n*df) with the scalar beam
/// gain b = b_i(phi)^H x_i. Throws std::invalid_argument on a schedule
/// violation.
Eigen::VectorXcd atom(int illuminator, int receiver, int slot, const Vec2& point,
                      const Scene& scene, const IlluminationSchedule& schedule,
                      const std::vector<BeamCodebook>& codebooks, const TxPlan& plan);

SensingMatrix assemble_sensing_matrix(const Scene& scene,
                                      const IlluminationSchedule& schedule,
                                      const std::vector<BeamCodebook>& codebooks,
                                      const TxPlan& plan);

/// Noiseless stacked signal for explicit targets and fading coefficients,
/// evaluated at the exact target coordinates (the grid plays no role here).
Eigen::VectorXcd noiseless_signal(const Scene& scene,
                                  const IlluminationSchedule& schedule,
                                  const std::vector<BeamCodebook>& codebooks,
                                  const TxPlan& plan,
                                  const std::vector<Target>& targets,
                                  const Eigen::VectorXcd& fading);

/// Draws rho_l ~ CN(0, rcs_l) (shared by all slots and subcarriers), builds
/// the stacked signal from the true target positions and adds CN(0, N0)
/// noise unless `noiseless`.
Observation synthesize_observation(const Scene& scene,
                                   const IlluminationSchedule& schedule,
                                   const std::vector<BeamCodebook>& codebooks,
                                   const TxPlan& plan, std::mt19937_64& rng,
                                   bool noiseless = false);

/// Debug dump: 16-byte header (rows, cols as little-endian u64) followed by
/// row-major interleaved (re, im) doubles.
void dump_complex_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd load_complex_matrix(const std::filesystem::path& path);

}  // namespace cfsense
