// SPDX-License-Identifier: Apache-2.0
#include "cfsense/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cfsense/errors.hpp"

namespace cfsense {

namespace {

constexpr double kPruneRel = 1e-12;  // gamma below kPruneRel * max(gamma) is pinned to 0

std::vector<int> active_set(const Eigen::VectorXd& gamma) {
  std::vector<int> act;
  act.reserve(gamma.size());
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    if (gamma(i) < 0.0) throw std::invalid_argument("gamma must be nonnegative");
    if (gamma(i) > 0.0) act.push_back(static_cast<int>(i));
  }
  return act;
}

Eigen::MatrixXcd gather_columns(const Eigen::MatrixXcd& a, const std::vector<int>& idx) {
  Eigen::MatrixXcd out(a.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(j) = a.col(idx[j]);
  return out;
}

// State shared across EM iterations: the whitened system plus, when the
// column dimension is the smaller one, the cached Gram matrix for the direct
// posterior route. Otherwise the matrix-inversion-lemma route over the row
// dimension is used (equivalent, cheaper when rows < Q).
struct EmWorkspace {
  const Eigen::MatrixXcd& aw;
  const Eigen::VectorXcd& yw;
  bool direct;
  Eigen::MatrixXcd gram;     // A'^H A', only when direct
  Eigen::VectorXcd z;        // A'^H y', only when direct
  double y_sq;

  explicit EmWorkspace(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y)
      : aw(a), yw(y), direct(a.cols() <= a.rows()), y_sq(y.squaredNorm()) {
    if (direct) {
      gram.noalias() = a.adjoint() * a;
      z.noalias() = a.adjoint() * y;
    }
  }
};

struct EStepLight {
  Eigen::VectorXcd mean;        // full-length, pinned coords zero
  Eigen::VectorXd sigma_diag;   // full-length, pinned coords zero
  double neg_log_ev = 0.0;      // of the gamma used for this step
};

// One E-step returning mean and the covariance diagonal only; also evaluates
// the evidence of `gamma` from the same factorization when asked.
EStepLight e_step_light(const EmWorkspace& ws, const Eigen::VectorXd& gamma,
                        double noise_power_w, bool want_evidence) {
  const Eigen::Index q = gamma.size();
  const Eigen::Index rows = ws.aw.rows();
  EStepLight out;
  out.mean = Eigen::VectorXcd::Zero(q);
  out.sigma_diag = Eigen::VectorXd::Zero(q);

  const std::vector<int> act = active_set(gamma);
  const Eigen::Index na = static_cast<Eigen::Index>(act.size());
  if (na == 0) {
    if (want_evidence) out.neg_log_ev = rows * std::log(noise_power_w) + ws.y_sq;
    return out;
  }

  Eigen::VectorXd g_act(na);
  for (Eigen::Index j = 0; j < na; ++j) g_act(j) = gamma(act[j]);

  if (ws.direct) {
    Eigen::MatrixXcd h(na, na);
    for (Eigen::Index cj = 0; cj < na; ++cj) {
      for (Eigen::Index ri = 0; ri < na; ++ri) h(ri, cj) = ws.gram(act[ri], act[cj]);
      h(cj, cj) += 1.0 / g_act(cj);
    }
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(h);
    if (ldlt.info() != Eigen::Success) {
      throw NumericalError("SBL E-step: LDLT factorization failed");
    }
    Eigen::VectorXcd z_act(na);
    for (Eigen::Index j = 0; j < na; ++j) z_act(j) = ws.z(act[j]);
    const Eigen::MatrixXcd sigma_act =
        ldlt.solve(Eigen::MatrixXcd::Identity(na, na));
    const Eigen::VectorXcd mu_act = sigma_act * z_act;
    for (Eigen::Index j = 0; j < na; ++j) {
      out.mean(act[j]) = mu_act(j);
      out.sigma_diag(act[j]) = std::max(0.0, sigma_act(j, j).real());
    }
    if (want_evidence) {
      // log det Sigma_y = rows log N0 + sum log gamma + log det H.
      const Eigen::VectorXd d = ldlt.vectorD().real();
      if ((d.array() <= 0.0).any()) {
        throw NumericalError("SBL evidence: observation covariance numerically singular");
      }
      const double logdet = g_act.array().log().sum() + d.array().log().sum();
      const double quad = ws.y_sq - z_act.dot(mu_act).real();
      out.neg_log_ev = rows * std::log(noise_power_w) + logdet + quad;
    }
    return out;
  }

  // Row-dimension route: B = I + A' Gamma A'^H.
  const Eigen::MatrixXcd a_act = gather_columns(ws.aw, act);
  const Eigen::MatrixXcd c = a_act * g_act.cwiseSqrt().asDiagonal();
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(rows, rows);
  b.selfadjointView<Eigen::Lower>().rankUpdate(c);
  Eigen::LLT<Eigen::MatrixXcd> llt(b);  // reads the lower triangle only
  if (llt.info() != Eigen::Success) {
    throw NumericalError("SBL E-step: LLT factorization failed");
  }
  const Eigen::VectorXcd binv_y = llt.solve(ws.yw);
  const Eigen::VectorXcd mu_act =
      g_act.asDiagonal() * (a_act.adjoint() * binv_y);
  const Eigen::MatrixXcd x = llt.matrixL().solve(a_act);
  for (Eigen::Index j = 0; j < na; ++j) {
    const double s = x.col(j).squaredNorm();
    out.mean(act[j]) = mu_act(j);
    out.sigma_diag(act[j]) = std::max(0.0, g_act(j) * (1.0 - g_act(j) * s));
  }
  if (want_evidence) {
    const double logdet =
        2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
    const double quad = ws.yw.dot(binv_y).real();
    out.neg_log_ev = rows * std::log(noise_power_w) + logdet + quad;
  }
  return out;
}

// Full covariance for the trailing E-step / public contract.
std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> e_step_full(
    const Eigen::MatrixXcd& aw, const Eigen::VectorXcd& yw,
    const Eigen::VectorXd& gamma) {
  const Eigen::Index q = gamma.size();
  Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(q);
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(q, q);

  const std::vector<int> act = active_set(gamma);
  const Eigen::Index na = static_cast<Eigen::Index>(act.size());
  if (na == 0) return {mean, cov};

  const Eigen::MatrixXcd a_act = gather_columns(aw, act);
  Eigen::MatrixXcd h = a_act.adjoint() * a_act;
  for (Eigen::Index j = 0; j < na; ++j) h(j, j) += 1.0 / gamma(act[j]);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(h);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("SBL E-step: LDLT factorization failed");
  }
  const Eigen::MatrixXcd sigma_act = ldlt.solve(Eigen::MatrixXcd::Identity(na, na));
  const Eigen::VectorXcd mu_act = sigma_act * (a_act.adjoint() * yw);
  for (Eigen::Index j = 0; j < na; ++j) {
    mean(act[j]) = mu_act(j);
    for (Eigen::Index i = 0; i < na; ++i) cov(act[i], act[j]) = sigma_act(i, j);
  }
  return {mean, cov};
}

void check_finite(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y) {
  if (!a.allFinite() || !y.allFinite()) {
    throw NumericalError("non-finite entries in the input system");
  }
}

}  // namespace

std::pair<Eigen::MatrixXcd, Eigen::VectorXcd> whiten(const Eigen::MatrixXcd& a,
                                                     const Eigen::VectorXcd& y,
                                                     double noise_power_w) {
  if (!(noise_power_w > 0.0)) {
    throw std::domain_error("whiten: noise power must be positive");
  }
  const double scale = 1.0 / std::sqrt(noise_power_w);
  return {a * scale, y * scale};
}

std::pair<Eigen::VectorXcd, Eigen::MatrixXcd> sbl_e_step(
    const Eigen::MatrixXcd& a_whitened, const Eigen::VectorXcd& y_whitened,
    const Eigen::VectorXd& gamma) {
  if (a_whitened.cols() != gamma.size() || a_whitened.rows() != y_whitened.size()) {
    throw std::invalid_argument("sbl_e_step: dimension mismatch");
  }
  check_finite(a_whitened, y_whitened);
  return e_step_full(a_whitened, y_whitened, gamma);
}

Eigen::VectorXd sbl_m_step(const Eigen::VectorXcd& mean,
                           const Eigen::MatrixXcd& covariance) {
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
    throw std::invalid_argument("sbl_m_step: dimension mismatch");
  }
  Eigen::VectorXd gamma(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    gamma(i) = std::norm(mean(i)) + covariance(i, i).real();
  }
  return gamma;
}

double neg_log_evidence(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                        const Eigen::VectorXd& gamma, double noise_power_w) {
  if (a.cols() != gamma.size() || a.rows() != y.size()) {
    throw std::invalid_argument("neg_log_evidence: dimension mismatch");
  }
  check_finite(a, y);
  auto [aw, yw] = whiten(a, y, noise_power_w);
  EmWorkspace ws(aw, yw);
  return e_step_light(ws, gamma, noise_power_w, /*want_evidence=*/true).neg_log_ev;
}

SblState sbl_em(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y,
                const SblOptions& opts) {
  if (a.rows() != y.size()) throw std::invalid_argument("sbl_em: dimension mismatch");
  if (opts.max_iters < 1) throw std::invalid_argument("sbl_em: max_iters must be >= 1");
  if (!(opts.stop_tol > 0.0)) throw std::invalid_argument("sbl_em: stop_tol must be positive");
  check_finite(a, y);
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    if (a.col(c).squaredNorm() == 0.0) {
      throw std::invalid_argument("sbl_em: dictionary column " + std::to_string(c) +
                                  " is all-zero");
    }
  }

  auto [aw, yw] = whiten(a, y, opts.noise_power_w);
  const EmWorkspace ws(aw, yw);
  const Eigen::Index q = a.cols();

  SblState state;
  state.gamma = Eigen::VectorXd::Ones(q);

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const EStepLight e =
        e_step_light(ws, state.gamma, opts.noise_power_w, opts.evidence_tracking);
    if (opts.evidence_tracking) state.neg_log_evidence.push_back(e.neg_log_ev);

    Eigen::VectorXd next(q);
    for (Eigen::Index i = 0; i < q; ++i) {
      next(i) = state.gamma(i) > 0.0 ? std::norm(e.mean(i)) + e.sigma_diag(i) : 0.0;
    }
    const double cutoff = kPruneRel * next.maxCoeff();
    for (Eigen::Index i = 0; i < q; ++i) {
      if (next(i) < cutoff) next(i) = 0.0;
    }

    state.iterations_run = iter + 1;
    const double denom = state.gamma.norm();
    const double change = (next - state.gamma).norm();
    state.gamma = next;
    if (denom == 0.0 || change / denom < opts.stop_tol) break;
  }

  // Trailing E-step so the reported posterior matches the returned gamma.
  auto [mean, cov] = e_step_full(aw, yw, state.gamma);
  state.mean = std::move(mean);
  state.covariance = std::move(cov);
  if (opts.evidence_tracking) {
    state.neg_log_evidence.push_back(
        e_step_light(ws, state.gamma, opts.noise_power_w, true).neg_log_ev);
  }
  return state;
}

OmpResult omp(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y, int sparsity) {
  const Eigen::Index q = a.cols();
  if (sparsity < 1 || sparsity > q) {
    throw std::invalid_argument("omp: sparsity must be in [1, Q]");
  }
  if (a.rows() != y.size()) throw std::invalid_argument("omp: dimension mismatch");

  Eigen::VectorXd inv_norms(q);
  for (Eigen::Index c = 0; c < q; ++c) {
    const double n = a.col(c).norm();
    inv_norms(c) = n > 0.0 ? 1.0 / n : 0.0;  // zero columns never selected
  }

  OmpResult res;
  Eigen::VectorXcd residual = y;
  res.residual_norm = residual.norm();
  std::vector<bool> selected(q, false);
  Eigen::VectorXcd coef;

  for (int t = 0; t < sparsity; ++t) {
    const Eigen::VectorXcd corr = a.adjoint() * residual;
    int best = -1;
    double best_score = -1.0;
    for (Eigen::Index c = 0; c < q; ++c) {
      if (selected[c]) continue;
      const double score = std::abs(corr(c)) * inv_norms(c);
      if (score > best_score) {
        best_score = score;
        best = static_cast<int>(c);
      }
    }
    if (best < 0) break;
    selected[best] = true;
    res.support.push_back(best);

    const Eigen::MatrixXcd a_s = gather_columns(a, res.support);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a_s);
    if (qr.rank() < a_s.cols()) {
      res.rank_deficient = true;
      coef = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd>(a_s).solve(y);
    } else {
      coef = qr.solve(y);
    }
    residual = y - a_s * coef;
    res.residual_norm = residual.norm();
    if (res.residual_norm == 0.0) break;
  }
  res.coefficients = coef;
  return res;
}

}  // namespace cfsense
