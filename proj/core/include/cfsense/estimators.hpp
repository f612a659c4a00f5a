// SPDX-License-Identifier: Apache-2.0
//
// Sparse recovery of the grid-domain fading vector: sparse Bayesian learning
// via expectation-maximization, and orthogonal matching pursuit as the
// compressed-sensing baseline.
#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cfsense {

struct SblOptions {
  int max_iters = 200;          // G
  double stop_tol = 1e-4;       // epsilon on the relative gamma change
  double noise_power_w = 1.0;   // N0
  bool evidence_tracking = false;
};

struct SblState {
  Eigen::VectorXd gamma;            // hyperparameters, >= 0
  Eigen::VectorXcd mean;            // posterior mean of the fading vector
  Eigen::MatrixXcd covariance;      // posterior covariance, Hermitian PSD
  std::vector<double> neg_log_evidence;  // trace along the EM trajectory
  int iterations_run = 0;
};

/// Scales (A, y) by 1/sqrt(N0) so the unit-noise posterior formulas apply
/// verbatim. Throws std::domain_error for N0 <= 0.
std::pair<Eigen::MatrixXcd, Eigen::VectorXcd> whiten(const Eigen::MatrixXcd& a,
                                                     const Eigen::VectorXcd& y,
                                                     double noise_power_w);

/// Posterior of the fading vector under whitened inputs:
/// Sigma = (A'^H A' + Gamma^-1)^-1, mu = Sigma A'^H y'. Coordinates with
/// gamma_i = 0 are pinned to mu_i = 0 and zero covariance row/column.
std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> sbl_e_step(
    const Eigen::MatrixXcd& a_whitened, const Eigen::VectorXcd& y_whitened,
    const Eigen::VectorXd& gamma);

/// gamma_i = |mu_i|^2 + Sigma_ii.
Eigen::VectorXd sbl_m_step(const Eigen::VectorXcd& mean,
                           const Eigen::MatrixXcd& covariance);

/// log det(Sigma_y) + y^H Sigma_y^-1 y with Sigma_y = A Gamma A^H + N0 I
/// (the additive constant is dropped).
double neg_log_evidence(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                        const Eigen::VectorXd& gamma, double noise_power_w);

/// Full EM loop: gamma starts at all-ones, alternates E/M steps until the
/// relative gamma change drops below stop_tol or max_iters is hit, then runs
/// one trailing E-step so the returned mean/covariance match the returned
/// gamma. Deterministic given (a, y, opts).
SblState sbl_em(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                const SblOptions& opts);

struct OmpResult {
  std::vector<int> support;          // selection order
  Eigen::VectorXcd coefficients;     // aligned with support
  double residual_norm = 0.0;
  bool rank_deficient = false;       // least-squares system was rank deficient
};

/// Standard OMP with column-normalized correlation selection and a full
/// least-squares refit per iteration; runs `sparsity` iterations (fewer only
/// if the residual hits exactly zero).
OmpResult omp(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y, int sparsity);

}  // namespace cfsense
