// SPDX-License-Identifier: Apache-2.0
#include "cfsense/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cfsense/errors.hpp"

namespace cfsense {

namespace {

// O(n^3) Hungarian algorithm (potentials formulation); returns for each row
// the assigned column of the minimum-cost perfect matching.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

DetectionResult top_l(const Eigen::VectorXd& gamma, const GridSpec& grid, int count) {
  const int q = static_cast<int>(gamma.size());
  if (q != grid.size()) throw std::invalid_argument("top_l: field/grid size mismatch");
  if (count < 1 || count > q) throw std::invalid_argument("top_l: count must be in [1, Q]");

  std::vector<int> order(q);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + count, order.end(),
                    [&](int a, int b) {
                      if (gamma(a) != gamma(b)) return gamma(a) > gamma(b);
                      return a < b;
                    });
  DetectionResult res;
  res.method = DetectionMethod::kTopL;
  for (int t = 0; t < count; ++t) {
    const int idx = order[t];
    res.indices.push_back(idx);
    res.scores.push_back(gamma(idx));
    res.locations.push_back(grid.points[static_cast<std::size_t>(idx)]);
  }
  return res;
}

DetectionResult cfar_detect(const Eigen::VectorXd& gamma, const GridSpec& grid,
                            double pfa, int guard_cells, int training_cells) {
  const int nx = grid.nx;
  const int ny = grid.ny;
  if (static_cast<int>(gamma.size()) != nx * ny) {
    throw std::invalid_argument("cfar_detect: field/grid size mismatch");
  }
  if (!(pfa > 0.0 && pfa < 1.0)) throw ConfigError("cfar: pfa must be in (0, 1)");
  if (training_cells < 1) throw ConfigError("cfar: training cells must be >= 1");
  if (guard_cells < 0) throw ConfigError("cfar: guard cells must be >= 0");
  const int w = guard_cells + training_cells;
  if (2 * w + 1 > nx || 2 * w + 1 > ny) {
    throw ConfigError("cfar: guard+train window larger than the grid");
  }

  struct Hit {
    int idx;
    double score;
  };
  std::vector<Hit> hits;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int idx = grid.flat_index(ix, iy);
      const double value = gamma(idx);

      double train_sum = 0.0;
      int train_count = 0;
      bool is_local_max = true;
      for (int dy = -w; dy <= w && is_local_max; ++dy) {
        const int jy = iy + dy;
        if (jy < 0 || jy >= ny) continue;
        for (int dx = -w; dx <= w; ++dx) {
          const int jx = ix + dx;
          if (jx < 0 || jx >= nx) continue;
          if (dx == 0 && dy == 0) continue;
          const int jdx = grid.flat_index(jx, jy);
          const double other = gamma(jdx);
          if (other > value || (other == value && jdx < idx)) {
            is_local_max = false;
            break;
          }
          if (std::max(std::abs(dx), std::abs(dy)) > guard_cells) {
            train_sum += other;
            train_count += 1;
          }
        }
      }
      if (!is_local_max || train_count == 0) continue;
      // CA-CFAR threshold; alpha uses the in-bounds ring size so edge cells
      // keep the configured false-alarm rate.
      const double alpha =
          train_count * (std::pow(pfa, -1.0 / train_count) - 1.0);
      const double threshold = alpha * (train_sum / train_count);
      if (value > threshold) hits.push_back({idx, value});
    }
  }

  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.idx < b.idx;
  });
  DetectionResult res;
  res.method = DetectionMethod::kCfar;
  for (const Hit& h : hits) {
    res.indices.push_back(h.idx);
    res.scores.push_back(h.score);
    res.locations.push_back(grid.points[static_cast<std::size_t>(h.idx)]);
  }
  return res;
}

MetricReport score_on_grid(const std::vector<int>& truth_indices,
                           const std::vector<int>& detected_indices,
                           int total_targets) {
  std::vector<int> truth = truth_indices;
  std::vector<int> det = detected_indices;
  std::sort(truth.begin(), truth.end());
  std::sort(det.begin(), det.end());

  std::vector<int> missed_set, ghost_set;
  std::set_difference(truth.begin(), truth.end(), det.begin(), det.end(),
                      std::back_inserter(missed_set));
  std::set_difference(det.begin(), det.end(), truth.begin(), truth.end(),
                      std::back_inserter(ghost_set));

  MetricReport r;
  r.missed = static_cast<int>(missed_set.size());
  r.ghost = static_cast<int>(ghost_set.size());
  r.total = total_targets;
  const double denom = total_targets > 0
                           ? static_cast<double>(total_targets)
                           : std::numeric_limits<double>::quiet_NaN();
  r.mdr = r.missed / denom;
  r.far = r.ghost / denom;
  r.mse_m = std::numeric_limits<double>::quiet_NaN();
  return r;
}

double mse_locations(const std::vector<Vec2>& truth, const std::vector<Vec2>& estimate) {
  if (truth.size() != estimate.size()) {
    throw std::invalid_argument("mse_locations: list lengths differ");
  }
  const int n = static_cast<int>(truth.size());
  if (n == 0) return 0.0;
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) cost(i, j) = distance(truth[i], estimate[j]);
  }
  const std::vector<int> match = min_cost_assignment(cost);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += cost(i, match[i]);
  return sum / n;
}

}  // namespace cfsense
