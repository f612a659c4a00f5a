// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations the implementation is checked against.
// Everything here is deliberately the naive route: explicit inverses, dense
// covariances, exhaustive enumeration.
#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cfsense/scene.hpp"

namespace testing {

/// Linear-Gaussian posterior with explicit noise power:
/// Sigma = (A^H A / N0 + Gamma^-1)^-1, mu = Sigma A^H y / N0.
/// Requires all gamma > 0.
inline std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> direct_posterior(
    const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y, const Eigen::VectorXd& gamma,
    double noise_power) {
  Eigen::MatrixXcd prec = a.adjoint() * a / noise_power;
  for (Eigen::Index i = 0; i < gamma.size(); ++i) prec(i, i) += 1.0 / gamma(i);
  const Eigen::MatrixXcd cov = prec.inverse();
  const Eigen::VectorXcd mu = cov * (a.adjoint() * y) / noise_power;
  return {mu, cov};
}

/// log det(Sigma_y) + y^H Sigma_y^-1 y from the dense rows x rows covariance.
inline double dense_neg_log_evidence(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                                     const Eigen::VectorXd& gamma, double noise_power) {
  const Eigen::Index rows = a.rows();
  Eigen::MatrixXcd sy = noise_power * Eigen::MatrixXcd::Identity(rows, rows);
  sy += a * gamma.asDiagonal() * a.adjoint();
  const Eigen::LLT<Eigen::MatrixXcd> llt(sy);
  const double logdet = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
  return logdet + y.dot(llt.solve(y)).real();
}

/// Minimum over all permutations of the mean matched distance.
inline double exhaustive_min_mean_distance(const std::vector<cfsense::Vec2>& truth,
                                           const std::vector<cfsense::Vec2>& est) {
  const int n = static_cast<int>(truth.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += cfsense::distance(truth[i], est[perm[i]]);
    best = std::min(best, sum / n);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// All equal-sparsity supports within `order` substitutions of `active`
/// (as sorted index vectors, excluding `active` itself).
inline std::vector<std::vector<int>> supports_within_distance(
    const std::vector<int>& active, int num_points, int order) {
  const int l = static_cast<int>(active.size());
  std::vector<std::vector<int>> all;
  std::vector<int> current;
  // enumerate all l-subsets of [0, num_points)
  std::vector<int> c(l);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    all.push_back(c);
    int i = l - 1;
    while (i >= 0 && c[i] == num_points - l + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < l; ++j) c[j] = c[j - 1] + 1;
  }
  std::vector<std::vector<int>> out;
  for (const auto& cand : all) {
    std::vector<int> inter;
    std::set_intersection(cand.begin(), cand.end(), active.begin(), active.end(),
                          std::back_inserter(inter));
    const int dist = l - static_cast<int>(inter.size());
    if (dist >= 1 && dist <= order) out.push_back(cand);
  }
  return out;
}

inline Eigen::MatrixXcd random_complex_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = std::complex<double>(n(rng), n(rng));
  }
  return m;
}

inline Eigen::VectorXcd random_complex_vector(std::mt19937_64& rng, int rows) {
  return random_complex_matrix(rng, rows, 1).col(0);
}

}  // namespace testing
