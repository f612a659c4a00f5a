// SPDX-License-Identifier: Apache-2.0
//
// Turns the learned hyperparameter field into target locations (top-L or
// 2D cell-averaging CFAR) and scores detections against ground truth.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cfsense/scene.hpp"

namespace cfsense {

enum class DetectionMethod { kTopL, kCfar };

struct DetectionResult {
  std::vector<Vec2> locations;
  std::vector<int> indices;     // grid indices, distinct
  std::vector<double> scores;   // matching gamma values, descending
  DetectionMethod method = DetectionMethod::kTopL;
};

struct MetricReport {
  double mdr = 0.0;   // missed / total
  double far = 0.0;   // ghost / total
  double mse_m = 0.0; // mean matched distance, meters
  int missed = 0;
  int ghost = 0;
  int total = 0;
};

/// The `count` grid points with the largest field values; ties broken toward
/// the smaller index.
DetectionResult top_l(const Eigen::VectorXd& gamma, const GridSpec& grid, int count);

/// 2D cell-averaging CFAR with square guard/training rings and a local-max
/// gate. Threshold per cell: alpha * mean(training ring) with
/// alpha = n * (pfa^(-1/n) - 1), n the in-bounds training-cell count (edge
/// cells use the truncated ring).
DetectionResult cfar_detect(const Eigen::VectorXd& gamma, const GridSpec& grid,
                            double pfa, int guard_cells, int training_cells);

/// Set-difference scoring for on-grid scenes; rates are relative to the true
/// target count.
MetricReport score_on_grid(const std::vector<int>& truth_indices,
                           const std::vector<int>& detected_indices,
                           int total_targets);

/// Minimum over all assignments of the mean matched Euclidean distance,
/// computed by optimal bipartite matching (identical to the permutation
/// minimum). Requires equal list lengths.
double mse_locations(const std::vector<Vec2>& truth, const std::vector<Vec2>& estimate);

}  // namespace cfsense
