// SPDX-License-Identifier: Apache-2.0
//
// Pairwise-error-probability analysis of on-grid support detection:
// per-error-sequence UPEP bounds and their union bound.
#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

namespace cfsense {

/// A sparsity-L support hypothesis over Q grid points.
struct SupportHypothesis {
  std::vector<int> active;  // sorted, distinct indices
  int num_points = 0;       // Q

  int sparsity() const { return static_cast<int>(active.size()); }
};

/// e = q - q_hat for two equal-sparsity supports; entries in {-1, 0, +1} and
/// sum zero. `order` counts the substitutions (active indices moved).
struct ErrorSequence {
  std::vector<int> e;
  int order = 0;
};

/// All error sequences against supports q_hat of the same sparsity that
/// differ from q by at most `max_order` substitutions (e = 0 excluded).
/// Distinct q_hat yield distinct sequences; the enumeration is deterministic
/// (order ascending, then lexicographic).
std::vector<ErrorSequence> enumerate_errors(const SupportHypothesis& q, int max_order);

/// The quadratic-form matrix C^1/2 diag(e) A^H A diag(e) C^1/2 computed on
/// its natural support supp(e) <intersect> supp(C), returned with the
/// restriction map. C is the diagonal RCS vector, zero off the true support.
struct RestrictedQuadForm {
  Eigen::MatrixXcd matrix;   // Hermitian PSD on the restricted index set
  std::vector<int> indices;  // restriction map into [Q]
};
RestrictedQuadForm quad_form_matrix(const ErrorSequence& e, const Eigen::MatrixXcd& a,
                                    const Eigen::VectorXd& rcs_diag);

/// prod_i (1 + lambda_i/(4 N0))^-1 over the nonzero eigenvalues of the
/// quadratic-form matrix (eigenvalues below 1e-12 * lambda_max count as zero).
double upep(const ErrorSequence& e, const Eigen::MatrixXcd& a,
            const Eigen::VectorXd& rcs_diag, double noise_power_w);

/// Sum of upep over enumerate_errors; may exceed one.
double union_bound(const SupportHypothesis& q, const Eigen::MatrixXcd& a,
                   const Eigen::VectorXd& rcs_diag, double noise_power_w,
                   int max_order);

/// Monte Carlo check of the UPEP product: averages
/// exp(-g^H A~(e) g / (4 N0)) over g ~ CN(0, I) on the restricted support.
/// The product formula is this expectation exactly.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
McEstimate mc_validate_upep(const ErrorSequence& e, const Eigen::MatrixXcd& a,
                            const Eigen::VectorXd& rcs_diag, double noise_power_w,
                            int num_samples, std::mt19937_64& rng);

struct PepSequenceRecord {
  int id = 0;
  int order = 0;
  int rank = 0;      // r: number of nonzero eigenvalues
  double upep = 0.0;
};

struct PepReport {
  std::vector<PepSequenceRecord> sequences;
  double union_bound = 0.0;
  int enumeration_order = 0;
  double noise_power_w = 0.0;
};

PepReport build_pep_report(const SupportHypothesis& q, const Eigen::MatrixXcd& a,
                           const Eigen::VectorXd& rcs_diag, double noise_power_w,
                           int max_order);

}  // namespace cfsense
