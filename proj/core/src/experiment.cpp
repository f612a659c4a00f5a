// SPDX-License-Identifier: Apache-2.0
#include "cfsense/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "cfsense/errors.hpp"
#include "cfsense/estimators.hpp"
#include "cfsense/forward_model.hpp"
#include "cfsense/pep.hpp"
#include "cfsense/rng.hpp"
#include "cfsense/version.hpp"
#include "text_format.hpp"

namespace cfsense {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<int> eligible_grid_indices(const GridSpec& grid, const Vec2& lo,
                                       const Vec2& hi) {
  std::vector<int> out;
  for (std::size_t q = 0; q < grid.points.size(); ++q) {
    const Vec2& p = grid.points[q];
    if (p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y()) {
      out.push_back(static_cast<int>(q));
    }
  }
  return out;
}

// Detection result for the OMP support: grid locations scored by |coefficient|,
// descending.
DetectionResult detection_from_omp(const OmpResult& res, const GridSpec& grid) {
  std::vector<std::pair<double, int>> scored;
  for (std::size_t j = 0; j < res.support.size(); ++j) {
    scored.emplace_back(std::abs(res.coefficients(static_cast<Eigen::Index>(j))),
                        res.support[j]);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  DetectionResult det;
  det.method = DetectionMethod::kTopL;
  for (const auto& [score, idx] : scored) {
    det.indices.push_back(idx);
    det.scores.push_back(score);
    det.locations.push_back(grid.points[static_cast<std::size_t>(idx)]);
  }
  return det;
}

MetricReport score_outcome(const TrialRecord& rec, const DetectionResult& det,
                           TargetMode mode) {
  MetricReport m;
  if (mode == TargetMode::kOnGrid) {
    m = score_on_grid(rec.true_indices, det.indices, rec.num_targets);
  } else {
    m.mdr = kNan;
    m.far = kNan;
    m.total = rec.num_targets;
    m.mse_m = kNan;
  }
  if (det.locations.size() == rec.true_positions.size()) {
    m.mse_m = mse_locations(rec.true_positions, det.locations);
  }
  return m;
}

std::string csv_positions(const std::vector<Vec2>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ';';
    out += detail::fmt_double(pts[i].x());
    out += ':';
    out += detail::fmt_double(pts[i].y());
  }
  return out;
}

std::string csv_indices(const std::vector<int>& idx) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(idx[i]);
  }
  return out;
}

std::string hex_hash(std::uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::pair<double, double> snr_to_power(double snr_db, const ExperimentConfig& config) {
  if (config.abs_tx_power_w) {
    return {*config.abs_tx_power_w, *config.abs_noise_power_w};
  }
  const double n0 = 1.0;
  const double p = config.num_subcarriers * std::pow(10.0, snr_db / 10.0) * n0;
  return {p, n0};
}

namespace {

TrialArtifacts setup_trial(const ExperimentConfig& config, int snr_index, int trial_id,
                           std::mt19937_64& rng) {
  TrialArtifacts art;
  TrialRecord& rec = art.record;
  rec.snr_index = snr_index;
  rec.snr_db = config.snr_sweep_db.at(static_cast<std::size_t>(snr_index));
  rec.trial_id = trial_id;
  rec.config_hash = config.hash();
  rec.seed = config.seed;
  rec.union_bound = kNan;

  const auto [tx_power, noise_power] = snr_to_power(rec.snr_db, config);

  Scene scene;
  scene.rus = config.make_rus(tx_power);
  scene.grid = config.make_grid_spec();
  scene.carrier_freq_hz = config.carrier_freq_hz;
  scene.num_subcarriers = config.num_subcarriers;
  scene.subcarrier_spacing_hz = config.subcarrier_spacing_hz;
  scene.noise_power_w = noise_power;
  scene.num_slots = config.num_slots;

  // Draw order is fixed: target count, positions, beam weights, fading, noise.
  std::uniform_int_distribution<int> l_dist(config.num_targets_min,
                                            config.num_targets_max);
  rec.num_targets = l_dist(rng);

  if (config.target_mode == TargetMode::kOnGrid) {
    std::vector<int> pool = eligible_grid_indices(scene.grid, config.target_region_min,
                                                  config.target_region_max);
    for (int t = 0; t < rec.num_targets; ++t) {
      std::uniform_int_distribution<int> pick(t, static_cast<int>(pool.size()) - 1);
      std::swap(pool[t], pool[pick(rng)]);
      rec.true_indices.push_back(pool[t]);
      rec.true_positions.push_back(scene.grid.points[static_cast<std::size_t>(pool[t])]);
    }
  } else {
    std::uniform_real_distribution<double> ux(config.target_region_min.x(),
                                              config.target_region_max.x());
    std::uniform_real_distribution<double> uy(config.target_region_min.y(),
                                              config.target_region_max.y());
    while (static_cast<int>(rec.true_positions.size()) < rec.num_targets) {
      const Vec2 p{ux(rng), uy(rng)};
      // Probability-zero events, rejected so off-grid truly means off-grid.
      const bool on_grid_point =
          std::any_of(scene.grid.points.begin(), scene.grid.points.end(),
                      [&](const Vec2& g) { return g == p; });
      const bool duplicate =
          std::any_of(rec.true_positions.begin(), rec.true_positions.end(),
                      [&](const Vec2& q) { return q == p; });
      if (!on_grid_point && !duplicate) rec.true_positions.push_back(p);
    }
  }
  for (const Vec2& p : rec.true_positions) {
    scene.targets.push_back({p, config.target_rcs});
  }

  IlluminationSchedule schedule =
      make_schedule(config.schedule, config.num_rus(), config.num_slots,
                    config.schedule == ScheduleKind::kCustom
                        ? config.custom_slots
                        : std::vector<IlluminationSchedule::Slot>{});

  std::vector<BeamCodebook> codebooks;
  codebooks.reserve(scene.rus.size());
  for (const RuConfig& ru : scene.rus) {
    codebooks.push_back(build_codebook(ru.num_antennas, ru.num_beams));
  }

  TxPlan plan(schedule.slots.size());
  for (std::size_t s = 0; s < schedule.slots.size(); ++s) {
    plan[s].resize(scene.rus.size());
    for (int i : schedule.slots[s].transmitters) {
      plan[s][static_cast<std::size_t>(i)] =
          make_weights(config.bf_pattern, scene.rus[static_cast<std::size_t>(i)].num_beams,
                       tx_power, scene.num_subcarriers, rng);
    }
  }

  art.observation =
      synthesize_observation(scene, schedule, codebooks, plan, rng, /*noiseless=*/false);
  rec.fading_power = art.observation.fading.size() > 0
                         ? art.observation.fading.squaredNorm() /
                               static_cast<double>(art.observation.fading.size())
                         : 0.0;

  art.sensing = assemble_sensing_matrix(scene, schedule, codebooks, plan);
  art.scene = std::move(scene);
  art.schedule = std::move(schedule);
  return art;
}

}  // namespace

TrialArtifacts materialize_trial(const ExperimentConfig& config, int snr_index,
                                 int trial_id) {
  std::mt19937_64 rng = make_rng(config.seed, static_cast<std::uint64_t>(snr_index),
                                 static_cast<std::uint64_t>(trial_id));
  return setup_trial(config, snr_index, trial_id, rng);
}

TrialRecord run_trial(const ExperimentConfig& config, int snr_index, int trial_id,
                      std::mt19937_64& rng) {
  const auto t0 = std::chrono::steady_clock::now();

  TrialArtifacts art = setup_trial(config, snr_index, trial_id, rng);
  TrialRecord& rec = art.record;
  const Scene& scene = art.scene;
  const Observation& obs = art.observation;
  const SensingMatrix& sm = art.sensing;
  const double noise_power = scene.noise_power_w;

  for (SolverKind solver : config.solvers) {
    SolverOutcome out;
    out.solver = solver;
    try {
      if (solver == SolverKind::kSbl) {
        SblOptions opts;
        opts.max_iters = config.sbl_max_iters;
        opts.stop_tol = config.sbl_tol;
        opts.noise_power_w = noise_power;
        const SblState state = sbl_em(sm.a, obs.y, opts);
        out.detection = config.detector == DetectorKind::kCfar
                            ? cfar_detect(state.gamma, scene.grid, config.cfar_pfa,
                                          config.cfar_guard, config.cfar_train)
                            : top_l(state.gamma, scene.grid, rec.num_targets);
      } else {
        out.detection = detection_from_omp(omp(sm.a, obs.y, rec.num_targets), scene.grid);
      }
      out.metrics = score_outcome(rec, out.detection, config.target_mode);
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
      out.metrics.mdr = kNan;
      out.metrics.far = kNan;
      out.metrics.mse_m = kNan;
      out.metrics.total = rec.num_targets;
    }
    rec.outcomes.push_back(std::move(out));
  }

  if (config.pep_order > 0) {
    SupportHypothesis q;
    q.active = rec.true_indices;
    std::sort(q.active.begin(), q.active.end());
    q.num_points = scene.grid.size();
    Eigen::VectorXd rcs_diag = Eigen::VectorXd::Zero(scene.grid.size());
    for (int idx : q.active) rcs_diag(idx) = config.target_rcs;
    rec.union_bound = union_bound(q, sm.a, rcs_diag, noise_power, config.pep_order);
  }

  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

ResultTable run_sweep(const ExperimentConfig& config, int num_threads) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  ResultTable table;
  table.config = config;

  const int num_snr = static_cast<int>(config.snr_sweep_db.size());
  const int trials = config.trials;
  const std::size_t jobs = static_cast<std::size_t>(num_snr) * trials;
  table.records.resize(jobs);

  int workers = num_threads > 0 ? num_threads : config.threads;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
  }
  workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&]() {
    while (true) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) break;
      const int s = static_cast<int>(job) / trials;
      const int t = static_cast<int>(job) % trials;
      try {
        std::mt19937_64 rng = make_rng(config.seed, static_cast<std::uint64_t>(s),
                                       static_cast<std::uint64_t>(t));
        table.records[job] = run_trial(config, s, t, rng);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (int s = 0; s < num_snr; ++s) {
    for (SolverKind solver : config.solvers) {
      SweepAggregate agg;
      agg.snr_db = config.snr_sweep_db[static_cast<std::size_t>(s)];
      agg.solver = solver;
      agg.bf_pattern = config.bf_pattern;
      agg.trials = trials;
      double mdr_sum = 0.0, far_sum = 0.0, mse_sum = 0.0, ub_sum = 0.0;
      int scored = 0, mse_count = 0, ub_count = 0;
      for (int t = 0; t < trials; ++t) {
        const TrialRecord& rec = table.records[static_cast<std::size_t>(s) * trials + t];
        for (const SolverOutcome& out : rec.outcomes) {
          if (out.solver != solver || out.failed) continue;
          if (!std::isnan(out.metrics.mdr)) {
            mdr_sum += out.metrics.mdr;
            far_sum += out.metrics.far;
            ++scored;
          }
          if (!std::isnan(out.metrics.mse_m)) {
            mse_sum += out.metrics.mse_m;
            ++mse_count;
          }
        }
        if (!std::isnan(rec.union_bound)) {
          ub_sum += rec.union_bound;
          ++ub_count;
        }
      }
      agg.mdr = scored > 0 ? mdr_sum / scored : kNan;
      agg.far = scored > 0 ? far_sum / scored : kNan;
      agg.mse_m = mse_count > 0 ? mse_sum / mse_count : kNan;
      agg.union_bound = ub_count > 0 ? ub_sum / ub_count : kNan;
      table.aggregates.push_back(agg);
    }
  }

  table.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return table;
}

void emit_results(const ResultTable& table, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir.string());

  const auto open = [&](const char* name) {
    std::ofstream f(out_dir / name, std::ios::binary);  // '\n' endings everywhere
    if (!f) throw IoError("cannot open for writing: " + (out_dir / name).string());
    return f;
  };

  {
    auto f = open("sweep.csv");
    f << "snr_db,solver,bf_pattern,mdr,far,mse_m,union_bound,trials\n";
    for (const SweepAggregate& a : table.aggregates) {
      f << detail::fmt_double(a.snr_db) << ',' << to_string(a.solver) << ','
        << to_string(a.bf_pattern) << ',' << detail::fmt_double(a.mdr) << ','
        << detail::fmt_double(a.far) << ',' << detail::fmt_double(a.mse_m) << ','
        << detail::fmt_double(a.union_bound) << ',' << a.trials << '\n';
    }
    if (!f) throw IoError("write failed: " + (out_dir / "sweep.csv").string());
  }

  {
    auto f = open("trials.csv");
    f << "snr_db,trial,solver,bf_pattern,num_targets,fading_power,true_positions,"
         "detected_indices,mdr,far,mse_m,union_bound,failed,config_hash,seed\n";
    for (const TrialRecord& rec : table.records) {
      for (const SolverOutcome& out : rec.outcomes) {
        f << detail::fmt_double(rec.snr_db) << ',' << rec.trial_id << ','
          << to_string(out.solver) << ',' << to_string(table.config.bf_pattern) << ','
          << rec.num_targets << ',' << detail::fmt_double(rec.fading_power) << ','
          << csv_positions(rec.true_positions) << ',' << csv_indices(out.detection.indices)
          << ',' << detail::fmt_double(out.metrics.mdr) << ','
          << detail::fmt_double(out.metrics.far) << ','
          << detail::fmt_double(out.metrics.mse_m) << ','
          << detail::fmt_double(rec.union_bound) << ',' << (out.failed ? 1 : 0) << ','
          << hex_hash(rec.config_hash) << ',' << detail::fmt_u64(rec.seed) << '\n';
      }
    }
    if (!f) throw IoError("write failed: " + (out_dir / "trials.csv").string());
  }

  {
    nlohmann::ordered_json meta;
    meta["tool"] = "cfsense";
    meta["version"] = kVersion;
    meta["git_describe"] = kGitDescribe;
    meta["seed"] = table.config.seed;
    meta["config_hash"] = hex_hash(table.config.hash());
    {
      nlohmann::ordered_json lines = nlohmann::ordered_json::array();
      std::string echo = table.config.echo();
      std::size_t start = 0;
      while (start < echo.size()) {
        const auto nl = echo.find('\n', start);
        lines.push_back(echo.substr(start, nl - start));
        start = nl + 1;
      }
      meta["config"] = lines;
    }
    meta["snr_semantics"] =
        "snr_db = 10*log10(P_k / (N * N0)) with N0 = 1, unless absolute powers "
        "are configured";
    meta["pep_averaging"] =
        "union bound averaged over the same Monte Carlo target draws as detection";
    meta["wall_time_s"] = table.wall_time_s;
    auto f = open("meta.json");
    f << meta.dump(2) << '\n';
    if (!f) throw IoError("write failed: " + (out_dir / "meta.json").string());
  }
}

}  // namespace cfsense
