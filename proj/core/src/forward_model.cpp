// SPDX-License-Identifier: Apache-2.0
#include "cfsense/forward_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cfsense/errors.hpp"
#include "cfsense/rng.hpp"

namespace cfsense {

namespace {

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void validate_slot(const IlluminationSchedule::Slot& slot, int num_rus, int index) {
  const std::string where = "schedule slot " + std::to_string(index) + ": ";
  if (slot.transmitters.empty()) throw ConfigError(where + "empty transmitter set");
  if (slot.receivers.empty()) throw ConfigError(where + "empty receiver set");
  std::vector<bool> seen(num_rus, false);
  for (int k : slot.transmitters) {
    if (k < 0 || k >= num_rus) throw ConfigError(where + "transmitter index out of range");
    if (seen[k]) throw ConfigError(where + "duplicate RU index");
    seen[k] = true;
  }
  for (int k : slot.receivers) {
    if (k < 0 || k >= num_rus) throw ConfigError(where + "receiver index out of range");
    if (seen[k]) throw ConfigError(where + "RU both transmits and receives");
    seen[k] = true;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
    throw ConfigError(where + "transmitters and receivers must cover all RUs");
  }
}

// Shared by atom() and the assembler so a dictionary column is bit-identical
// to the standalone atom.
void atom_into(Eigen::Ref<Eigen::VectorXcd> out, const RuConfig& illum,
               const RuConfig& recv, const Vec2& point, const Scene& scene,
               const Eigen::VectorXcd& x_illum) {
  const PathParams pp = path_params(illum, recv, point, scene.wavelength());
  const std::complex<double> gain =
      steering_vector(illum.num_antennas, pp.aod).dot(x_illum);  // b = b_i^H x_i
  const Eigen::VectorXcd rx_steer = steering_vector(recv.num_antennas, pp.aoa);
  const double amp = std::sqrt(pp.pathloss);
  const std::complex<double> ramp_step =
      std::polar(1.0, -2.0 * std::numbers::pi * pp.delay * scene.subcarrier_spacing_hz);
  const int m_k = recv.num_antennas;
  std::complex<double> ramp = amp * gain;
  for (int n = 0; n < scene.num_subcarriers; ++n) {
    out.segment(static_cast<Eigen::Index>(n) * m_k, m_k) = ramp * rx_steer;
    ramp *= ramp_step;
  }
}

const TxWeights& weights_for(const TxPlan& plan, int slot, int ru) {
  if (slot < 0 || slot >= static_cast<int>(plan.size()) ||
      ru >= static_cast<int>(plan[slot].size()) ||
      plan[slot][ru].w.size() == 0) {
    throw std::invalid_argument("no transmit weights for RU " + std::to_string(ru) +
                                " in slot " + std::to_string(slot));
  }
  return plan[slot][ru];
}

}  // namespace

IlluminationSchedule make_schedule(ScheduleKind kind, int num_rus, int num_slots,
                                   std::vector<IlluminationSchedule::Slot> custom) {
  if (num_rus < 2) throw ConfigError("schedule requires at least 2 RUs");
  IlluminationSchedule sched;
  if (kind == ScheduleKind::kRoundRobin) {
    if (num_slots != num_rus) {
      throw ConfigError("round_robin schedule requires num_slots == num_rus");
    }
    for (int s = 0; s < num_slots; ++s) {
      IlluminationSchedule::Slot slot;
      slot.transmitters = {s};
      for (int k = 0; k < num_rus; ++k) {
        if (k != s) slot.receivers.push_back(k);
      }
      sched.slots.push_back(std::move(slot));
    }
    return sched;
  }
  if (static_cast<int>(custom.size()) != num_slots) {
    throw ConfigError("custom schedule must define exactly num_slots slots");
  }
  for (int s = 0; s < num_slots; ++s) {
    validate_slot(custom[s], num_rus, s);
    std::sort(custom[s].transmitters.begin(), custom[s].transmitters.end());
    std::sort(custom[s].receivers.begin(), custom[s].receivers.end());
  }
  sched.slots = std::move(custom);
  return sched;
}

Eigen::Index observation_length(const Scene& scene, const IlluminationSchedule& schedule) {
  Eigen::Index rows = 0;
  for (const auto& slot : schedule.slots) {
    for (int k : slot.receivers) {
      rows += static_cast<Eigen::Index>(scene.num_subcarriers) *
              scene.rus.at(k).num_antennas;
    }
  }
  return rows;
}

std::vector<RowBlock> make_row_blocks(const Scene& scene,
                                      const IlluminationSchedule& schedule) {
  std::vector<RowBlock> blocks;
  Eigen::Index offset = 0;
  for (int s = 0; s < schedule.num_slots(); ++s) {
    for (int k : schedule.slots[s].receivers) {
      const Eigen::Index height =
          static_cast<Eigen::Index>(scene.num_subcarriers) * scene.rus.at(k).num_antennas;
      blocks.push_back({s, k, offset, height});
      offset += height;
    }
  }
  return blocks;
}

Eigen::MatrixXcd channel_matrix(int illuminator, int receiver, int subcarrier,
                                const Scene& scene, const Eigen::VectorXcd& fading) {
  if (illuminator == receiver) {
    throw std::invalid_argument("channel_matrix: illuminator equals receiver");
  }
  const RuConfig& illum = scene.rus.at(illuminator);
  const RuConfig& recv = scene.rus.at(receiver);
  Eigen::MatrixXcd h =
      Eigen::MatrixXcd::Zero(recv.num_antennas, illum.num_antennas);
  for (std::size_t l = 0; l < scene.targets.size(); ++l) {
    const PathParams pp =
        path_params(illum, recv, scene.targets[l].position, scene.wavelength());
    const std::complex<double> phase = std::polar(
        1.0, -2.0 * std::numbers::pi * pp.delay * subcarrier * scene.subcarrier_spacing_hz);
    const Eigen::VectorXcd a = steering_vector(recv.num_antennas, pp.aoa);
    const Eigen::VectorXcd b = steering_vector(illum.num_antennas, pp.aod);
    h.noalias() += (fading(static_cast<Eigen::Index>(l)) * std::sqrt(pp.pathloss) * phase) *
                   (a * b.adjoint());
  }
  return h;
}

Eigen::VectorXcd atom(int illuminator, int receiver, int slot, const Vec2& point,
                      const Scene& scene, const IlluminationSchedule& schedule,
                      const std::vector<BeamCodebook>& codebooks, const TxPlan& plan) {
  const auto& s = schedule.slots.at(slot);
  if (!contains(s.transmitters, illuminator) || !contains(s.receivers, receiver)) {
    throw std::invalid_argument("atom: (illuminator, receiver) violates the slot schedule");
  }
  const RuConfig& recv = scene.rus.at(receiver);
  const Eigen::VectorXcd x =
      tx_signal(codebooks.at(illuminator), weights_for(plan, slot, illuminator));
  Eigen::VectorXcd out(static_cast<Eigen::Index>(scene.num_subcarriers) * recv.num_antennas);
  atom_into(out, scene.rus.at(illuminator), recv, point, scene, x);
  return out;
}

SensingMatrix assemble_sensing_matrix(const Scene& scene,
                                      const IlluminationSchedule& schedule,
                                      const std::vector<BeamCodebook>& codebooks,
                                      const TxPlan& plan) {
  SensingMatrix sm;
  sm.row_blocks = make_row_blocks(scene, schedule);
  const Eigen::Index rows = observation_length(scene, schedule);
  const Eigen::Index cols = scene.grid.size();
  sm.a.setZero(rows, cols);

  Eigen::VectorXcd scratch;
  for (const auto& block : sm.row_blocks) {
    const auto& slot = schedule.slots[block.slot];
    scratch.resize(block.height);
    for (int i : slot.transmitters) {
      const Eigen::VectorXcd x =
          tx_signal(codebooks.at(i), weights_for(plan, block.slot, i));
      for (Eigen::Index q = 0; q < cols; ++q) {
        atom_into(scratch, scene.rus.at(i), scene.rus.at(block.receiver),
                  scene.grid.points[static_cast<std::size_t>(q)], scene, x);
        sm.a.col(q).segment(block.offset, block.height) += scratch;
      }
    }
  }
  return sm;
}

Eigen::VectorXcd noiseless_signal(const Scene& scene,
                                  const IlluminationSchedule& schedule,
                                  const std::vector<BeamCodebook>& codebooks,
                                  const TxPlan& plan,
                                  const std::vector<Target>& targets,
                                  const Eigen::VectorXcd& fading) {
  if (static_cast<Eigen::Index>(targets.size()) != fading.size()) {
    throw std::invalid_argument("noiseless_signal: targets/fading size mismatch");
  }
  const Eigen::Index rows = observation_length(scene, schedule);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(rows);
  Eigen::VectorXcd scratch;
  for (const auto& block : make_row_blocks(scene, schedule)) {
    const auto& slot = schedule.slots[block.slot];
    scratch.resize(block.height);
    for (int i : slot.transmitters) {
      const Eigen::VectorXcd x =
          tx_signal(codebooks.at(i), weights_for(plan, block.slot, i));
      for (std::size_t l = 0; l < targets.size(); ++l) {
        atom_into(scratch, scene.rus.at(i), scene.rus.at(block.receiver),
                  targets[l].position, scene, x);
        y.segment(block.offset, block.height) +=
            fading(static_cast<Eigen::Index>(l)) * scratch;
      }
    }
  }
  return y;
}

Observation synthesize_observation(const Scene& scene,
                                   const IlluminationSchedule& schedule,
                                   const std::vector<BeamCodebook>& codebooks,
                                   const TxPlan& plan, std::mt19937_64& rng,
                                   bool noiseless) {
  Observation obs;
  obs.targets = scene.targets;
  obs.noise_power_w = scene.noise_power_w;
  obs.fading.resize(static_cast<Eigen::Index>(scene.targets.size()));
  for (std::size_t l = 0; l < scene.targets.size(); ++l) {
    obs.fading(static_cast<Eigen::Index>(l)) = complex_normal(rng, scene.targets[l].rcs);
  }
  obs.y = noiseless_signal(scene, schedule, codebooks, plan, scene.targets, obs.fading);
  if (!noiseless) {
    for (Eigen::Index r = 0; r < obs.y.size(); ++r) {
      obs.y(r) += complex_normal(rng, scene.noise_power_w);
    }
  }

  obs.on_grid = !scene.targets.empty();
  for (const auto& t : scene.targets) {
    int match = -1;
    for (std::size_t q = 0; q < scene.grid.points.size(); ++q) {
      if (scene.grid.points[q] == t.position) {
        match = static_cast<int>(q);
        break;
      }
    }
    if (match < 0) {
      obs.on_grid = false;
      obs.grid_indices.clear();
      break;
    }
    obs.grid_indices.push_back(match);
  }
  return obs;
}

void dump_complex_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double re = m(r, c).real();
      const double im = m(r, c).imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof(re));
      out.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Eigen::MatrixXcd load_complex_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::uint64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!in) throw IoError("truncated header: " + path.string());
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::uint64_t c = 0; c < cols; ++c) {
      double re = 0.0, im = 0.0;
      in.read(reinterpret_cast<char*>(&re), sizeof(re));
      in.read(reinterpret_cast<char*>(&im), sizeof(im));
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {re, im};
    }
  }
  if (!in) throw IoError("truncated payload: " + path.string());
  return m;
}

}  // namespace cfsense
