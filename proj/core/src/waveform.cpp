// SPDX-License-Identifier: Apache-2.0
#include "cfsense/waveform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cfsense/errors.hpp"

namespace cfsense {

Eigen::VectorXcd steering_vector(int num_antennas, double angle) {
  if (num_antennas < 1) throw std::invalid_argument("steering_vector: M must be >= 1");
  Eigen::VectorXcd v(num_antennas);
  const double phase_step = std::numbers::pi * std::sin(angle);
  const std::complex<double> step = std::polar(1.0, phase_step);
  std::complex<double> cur(1.0, 0.0);
  for (int m = 0; m < num_antennas; ++m) {
    v(m) = cur;
    cur *= step;
  }
  return v;
}

BeamCodebook build_codebook(int num_antennas, int num_beams) {
  if (num_beams < 1 || num_beams >= num_antennas) {
    throw ConfigError("build_codebook: requires 1 <= Z < M, got Z=" +
                      std::to_string(num_beams) + " M=" + std::to_string(num_antennas));
  }
  BeamCodebook cb;
  cb.beams.resize(num_antennas, num_beams);
  cb.beam_angles.resize(num_beams);
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(num_antennas));
  for (int z = 0; z < num_beams; ++z) {
    const double s = -1.0 + static_cast<double>(2 * z + 1) / num_beams;
    const double angle = std::asin(s);
    cb.beam_angles[z] = angle;
    cb.beams.col(z) = steering_vector(num_antennas, angle) * inv_sqrt_m;
  }
  return cb;
}

TxWeights make_weights(BfPattern pattern, int num_beams, double tx_power_w,
                       int num_subcarriers, std::mt19937_64& rng) {
  if (num_beams < 1) throw std::invalid_argument("make_weights: Z must be >= 1");
  if (!(tx_power_w > 0.0)) throw std::invalid_argument("make_weights: P must be positive");
  if (num_subcarriers < 1) throw std::invalid_argument("make_weights: N must be >= 1");

  const double per_sc_power = tx_power_w / num_subcarriers;  // P/N
  TxWeights tw;
  tw.w.resize(num_beams);
  if (pattern == BfPattern::kEqual) {
    tw.w.setConstant(std::sqrt(per_sc_power / num_beams));
    return tw;
  }
  Eigen::VectorXd u(num_beams);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int z = 0; z < num_beams; ++z) u(z) = unif(rng);
  const double alpha = per_sc_power / u.sum();
  tw.w = (alpha * u).cwiseSqrt();
  return tw;
}

Eigen::VectorXcd tx_signal(const BeamCodebook& codebook, const TxWeights& weights) {
  if (weights.w.size() != codebook.beams.cols()) {
    throw std::invalid_argument("tx_signal: weight length does not match beam count");
  }
  return codebook.beams * weights.w.cast<std::complex<double>>();
}

Eigen::VectorXcd delay_response(double delay_s, std::complex<double> gain,
                                int num_subcarriers, double spacing_hz) {
  if (num_subcarriers < 1) throw std::invalid_argument("delay_response: N must be >= 1");
  Eigen::VectorXcd t(num_subcarriers);
  const std::complex<double> step =
      std::polar(1.0, -2.0 * std::numbers::pi * delay_s * spacing_hz);
  std::complex<double> ramp(1.0, 0.0);
  for (int n = 0; n < num_subcarriers; ++n) {
    t(n) = gain * ramp;
    ramp *= step;
  }
  return t;
}

}  // namespace cfsense
