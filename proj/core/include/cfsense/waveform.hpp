// SPDX-License-Identifier: Apache-2.0
//
// ULA array responses, beamforming codebooks, per-slot transmit weights and
// the generalized delay response across OFDM subcarriers.
#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace cfsense {

/// Unit-norm beamforming columns, uniformly spaced in sine space so the
/// codebook is near-orthonormal for a half-wavelength ULA.
struct BeamCodebook {
  Eigen::MatrixXcd beams;           // M x Z
  std::vector<double> beam_angles;  // Z radians, ascending
};

enum class BfPattern { kEqual, kRandom };

/// Nonnegative per-beam amplitude weights for one RU in one slot.
struct TxWeights {
  Eigen::VectorXd w;
};

/// Element m (0-based) is exp(j*pi*m*sin(angle)); half-wavelength spacing.
Eigen::VectorXcd steering_vector(int num_antennas, double angle);

/// Beam z (1-based) sits at sin(angle_z) = -1 + (2z-1)/Z. Throws ConfigError
/// unless 1 <= Z < M.
BeamCodebook build_codebook(int num_antennas, int num_beams);

/// Equal: w_z = sqrt(P/(N*Z)) for all z. Random: w_z^2 = alpha * u_z with
/// u_z ~ Unif(0,1) i.i.d. and alpha chosen so that sum w^2 = P/N exactly.
TxWeights make_weights(BfPattern pattern, int num_beams, double tx_power_w,
                       int num_subcarriers, std::mt19937_64& rng);

/// x = F * w; the transmit vector is the same on every subcarrier.
Eigen::VectorXcd tx_signal(const BeamCodebook& codebook, const TxWeights& weights);

/// Element n (0-based) is gain * exp(-j*2*pi*delay*n*spacing).
Eigen::VectorXcd delay_response(double delay_s, std::complex<double> gain,
                                int num_subcarriers, double spacing_hz);

}  // namespace cfsense
