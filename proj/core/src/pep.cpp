// SPDX-License-Identifier: Apache-2.0
#include "cfsense/pep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfsense/errors.hpp"
#include "cfsense/rng.hpp"

namespace cfsense {

namespace {

constexpr double kEigenRankRel = 1e-12;  // eigenvalues below this * max count as rank 0

void validate_support(const SupportHypothesis& q) {
  if (q.num_points < 1) throw std::invalid_argument("support: Q must be positive");
  int prev = -1;
  for (int i : q.active) {
    if (i <= prev || i >= q.num_points) {
      throw std::invalid_argument("support: indices must be sorted, distinct, in [0, Q)");
    }
    prev = i;
  }
}

// Visits all d-subsets of [0, n) in lexicographic order.
template <typename Fn>
void for_each_combination(int n, int d, Fn&& fn) {
  std::vector<int> c(d);
  for (int i = 0; i < d; ++i) c[i] = i;
  while (true) {
    fn(c);
    int i = d - 1;
    while (i >= 0 && c[i] == n - d + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < d; ++j) c[j] = c[j - 1] + 1;
  }
}

// Eigenvalues above the rank threshold, or empty when the matrix is zero.
std::vector<double> nonzero_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("pep: eigendecomposition failed");
  }
  const Eigen::VectorXd ev = es.eigenvalues();
  const double max_ev = ev.size() > 0 ? ev.maxCoeff() : 0.0;
  std::vector<double> out;
  if (max_ev <= 0.0) return out;
  const double cutoff = kEigenRankRel * max_ev;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) out.push_back(ev(i));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

double upep_from_eigenvalues(const std::vector<double>& lambda, double noise_power_w) {
  double prod = 1.0;
  for (double l : lambda) prod *= 1.0 / (1.0 + l / (4.0 * noise_power_w));
  return prod;
}

}  // namespace

std::vector<ErrorSequence> enumerate_errors(const SupportHypothesis& q, int max_order) {
  validate_support(q);
  if (max_order < 1) throw std::invalid_argument("enumerate_errors: order must be >= 1");

  const int big_q = q.num_points;
  const int l = q.sparsity();
  std::vector<int> inactive;
  inactive.reserve(big_q - l);
  {
    std::vector<bool> is_active(big_q, false);
    for (int i : q.active) is_active[i] = true;
    for (int i = 0; i < big_q; ++i) {
      if (!is_active[i]) inactive.push_back(i);
    }
  }

  std::vector<ErrorSequence> out;
  const int top = std::min({max_order, l, big_q - l});
  for (int d = 1; d <= top; ++d) {
    for_each_combination(l, d, [&](const std::vector<int>& removed) {
      for_each_combination(static_cast<int>(inactive.size()), d,
                           [&](const std::vector<int>& added) {
                             ErrorSequence seq;
                             seq.e.assign(big_q, 0);
                             for (int r : removed) seq.e[q.active[r]] = 1;
                             for (int a : added) seq.e[inactive[a]] = -1;
                             seq.order = d;
                             out.push_back(std::move(seq));
                           });
    });
  }
  return out;
}

RestrictedQuadForm quad_form_matrix(const ErrorSequence& e, const Eigen::MatrixXcd& a,
                                    const Eigen::VectorXd& rcs_diag) {
  const Eigen::Index q = a.cols();
  if (static_cast<Eigen::Index>(e.e.size()) != q || rcs_diag.size() != q) {
    throw std::invalid_argument("quad_form_matrix: dimension mismatch");
  }
  if ((rcs_diag.array() < 0.0).any()) {
    throw std::invalid_argument("quad_form_matrix: RCS diagonal must be nonnegative");
  }

  RestrictedQuadForm out;
  for (Eigen::Index i = 0; i < q; ++i) {
    if (e.e[static_cast<std::size_t>(i)] != 0 && rcs_diag(i) > 0.0) {
      out.indices.push_back(static_cast<int>(i));
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(out.indices.size());
  out.matrix.resize(n, n);
  if (n == 0) return out;

  Eigen::MatrixXcd a_r(a.rows(), n);
  Eigen::VectorXd scale(n);  // e_i * sqrt(c_i)
  for (Eigen::Index j = 0; j < n; ++j) {
    const int idx = out.indices[static_cast<std::size_t>(j)];
    a_r.col(j) = a.col(idx);
    scale(j) = e.e[static_cast<std::size_t>(idx)] * std::sqrt(rcs_diag(idx));
  }
  out.matrix = scale.asDiagonal() * (a_r.adjoint() * a_r) * scale.asDiagonal();
  return out;
}

double upep(const ErrorSequence& e, const Eigen::MatrixXcd& a,
            const Eigen::VectorXd& rcs_diag, double noise_power_w) {
  if (!(noise_power_w > 0.0)) throw std::domain_error("upep: N0 must be positive");
  const RestrictedQuadForm rq = quad_form_matrix(e, a, rcs_diag);
  return upep_from_eigenvalues(nonzero_eigenvalues(rq.matrix), noise_power_w);
}

double union_bound(const SupportHypothesis& q, const Eigen::MatrixXcd& a,
                   const Eigen::VectorXd& rcs_diag, double noise_power_w,
                   int max_order) {
  double sum = 0.0;
  for (const ErrorSequence& e : enumerate_errors(q, max_order)) {
    sum += upep(e, a, rcs_diag, noise_power_w);
  }
  return sum;
}

McEstimate mc_validate_upep(const ErrorSequence& e, const Eigen::MatrixXcd& a,
                            const Eigen::VectorXd& rcs_diag, double noise_power_w,
                            int num_samples, std::mt19937_64& rng) {
  if (num_samples < 1000) {
    throw std::invalid_argument("mc_validate_upep: needs at least 1000 samples");
  }
  if (!(noise_power_w > 0.0)) throw std::domain_error("mc_validate_upep: N0 must be positive");
  const RestrictedQuadForm rq = quad_form_matrix(e, a, rcs_diag);
  const Eigen::Index n = rq.matrix.rows();

  double sum = 0.0;
  double sum_sq = 0.0;
  Eigen::VectorXcd g(n);
  for (int s = 0; s < num_samples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) g(i) = complex_normal(rng, 1.0);
    const double quad = n > 0 ? (g.adjoint() * rq.matrix * g)(0, 0).real() : 0.0;
    const double v = std::exp(-quad / (4.0 * noise_power_w));
    sum += v;
    sum_sq += v * v;
  }
  McEstimate est;
  est.mean = sum / num_samples;
  const double var =
      std::max(0.0, (sum_sq - sum * sum / num_samples) / (num_samples - 1));
  est.std_error = std::sqrt(var / num_samples);
  return est;
}

PepReport build_pep_report(const SupportHypothesis& q, const Eigen::MatrixXcd& a,
                           const Eigen::VectorXd& rcs_diag, double noise_power_w,
                           int max_order) {
  PepReport report;
  report.enumeration_order = max_order;
  report.noise_power_w = noise_power_w;
  if (!(noise_power_w > 0.0)) throw std::domain_error("pep: N0 must be positive");
  int id = 0;
  for (const ErrorSequence& e : enumerate_errors(q, max_order)) {
    const RestrictedQuadForm rq = quad_form_matrix(e, a, rcs_diag);
    const std::vector<double> lambda = nonzero_eigenvalues(rq.matrix);
    PepSequenceRecord rec;
    rec.id = id++;
    rec.order = e.order;
    rec.rank = static_cast<int>(lambda.size());
    rec.upep = upep_from_eigenvalues(lambda, noise_power_w);
    report.union_bound += rec.upep;
    report.sequences.push_back(rec);
  }
  return report;
}

}  // namespace cfsense
