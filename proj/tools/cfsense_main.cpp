// SPDX-License-Identifier: Apache-2.0
//
// cfsense command line: `simulate` runs one verbose trial, `sweep` runs the
// full Monte Carlo experiment, `pep` emits the pairwise-error bound report.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cfsense/config.hpp"
#include "cfsense/errors.hpp"
#include "cfsense/experiment.hpp"
#include "cfsense/forward_model.hpp"
#include "cfsense/pep.hpp"
#include "cfsense/rng.hpp"
#include "cfsense/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Config file (defaults used when omitted)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "Override harness.seed");
  cmd->add_option("--out", args.out_dir, "Override harness.output_dir");
  cmd->add_option("--threads", args.threads, "Worker threads (0 = hardware)");
}

cfsense::ExperimentConfig load_config(const CommonArgs& args) {
  cfsense::ExperimentConfig cfg = args.config_path.empty()
                                      ? cfsense::ExperimentConfig{}
                                      : cfsense::parse_config(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.out_dir) cfg.output_dir = *args.out_dir;
  cfg.validate();
  return cfg;
}

void print_metrics(const cfsense::SolverOutcome& out) {
  std::cout << "  solver " << cfsense::to_string(out.solver);
  if (out.failed) {
    std::cout << "  FAILED: " << out.error << '\n';
    return;
  }
  std::cout << "  mdr=" << out.metrics.mdr << "  far=" << out.metrics.far
            << "  mse_m=" << out.metrics.mse_m << '\n';
  std::cout << "    detected:";
  for (std::size_t i = 0; i < out.detection.indices.size(); ++i) {
    std::cout << ' ' << out.detection.indices[i] << " ("
              << out.detection.locations[i].x() << ", "
              << out.detection.locations[i].y() << ")";
  }
  std::cout << '\n';
}

int cmd_simulate(const CommonArgs& args, int snr_index, int trial, bool dump) {
  const cfsense::ExperimentConfig cfg = load_config(args);
  if (snr_index < 0 || snr_index >= static_cast<int>(cfg.snr_sweep_db.size())) {
    throw cfsense::ConfigError("--snr-index out of range");
  }
  std::mt19937_64 rng = cfsense::make_rng(cfg.seed, static_cast<std::uint64_t>(snr_index),
                                          static_cast<std::uint64_t>(trial));
  const cfsense::TrialRecord rec = cfsense::run_trial(cfg, snr_index, trial, rng);

  std::cout << "trial " << trial << " @ " << rec.snr_db << " dB, L=" << rec.num_targets
            << ", bf=" << cfsense::to_string(cfg.bf_pattern) << '\n';
  std::cout << "  truth:";
  for (std::size_t i = 0; i < rec.true_positions.size(); ++i) {
    std::cout << " (" << rec.true_positions[i].x() << ", " << rec.true_positions[i].y()
              << ")";
    if (i < rec.true_indices.size()) std::cout << " [q=" << rec.true_indices[i] << "]";
  }
  std::cout << '\n';
  for (const auto& out : rec.outcomes) print_metrics(out);
  if (cfg.pep_order > 0) std::cout << "  union bound: " << rec.union_bound << '\n';
  std::cout << "  wall time: " << rec.wall_time_s << " s\n";

  if (dump) {
    const auto art = cfsense::materialize_trial(cfg, snr_index, trial);
    std::filesystem::create_directories(cfg.output_dir);
    cfsense::dump_complex_matrix(cfg.output_dir / "A.bin", art.sensing.a);
    cfsense::dump_complex_matrix(cfg.output_dir / "y.bin", art.observation.y);
    std::cout << "  dumped " << art.sensing.a.rows() << "x" << art.sensing.a.cols()
              << " dictionary to " << (cfg.output_dir / "A.bin").string() << '\n';
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const cfsense::ExperimentConfig cfg = load_config(args);
  const cfsense::ResultTable table = cfsense::run_sweep(cfg, args.threads);
  cfsense::emit_results(table, cfg.output_dir);
  std::cout << "snr_db  solver  mdr      far      mse_m    union_bound\n";
  for (const auto& a : table.aggregates) {
    std::cout << a.snr_db << "  " << cfsense::to_string(a.solver) << "  " << a.mdr
              << "  " << a.far << "  " << a.mse_m << "  " << a.union_bound << '\n';
  }
  std::cout << "results in " << cfg.output_dir.string() << " (" << table.wall_time_s
            << " s)\n";
  return 0;
}

int cmd_pep(const CommonArgs& args, int order_override) {
  cfsense::ExperimentConfig cfg = load_config(args);
  if (order_override > 0) cfg.pep_order = order_override;
  if (cfg.pep_order < 1) cfg.pep_order = 1;
  if (cfg.target_mode != cfsense::TargetMode::kOnGrid) {
    throw cfsense::ConfigError("pep analysis needs harness.target_mode = on_grid");
  }
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);

  for (int s = 0; s < static_cast<int>(cfg.snr_sweep_db.size()); ++s) {
    const auto art = cfsense::materialize_trial(cfg, s, /*trial_id=*/0);
    cfsense::SupportHypothesis q;
    q.active = art.record.true_indices;
    std::sort(q.active.begin(), q.active.end());
    q.num_points = art.scene.grid.size();
    Eigen::VectorXd rcs = Eigen::VectorXd::Zero(art.scene.grid.size());
    for (int idx : q.active) rcs(idx) = cfg.target_rcs;
    const cfsense::PepReport report = cfsense::build_pep_report(
        q, art.sensing.a, rcs, art.scene.noise_power_w, cfg.pep_order);

    const auto path = cfg.output_dir / ("pep_" + std::to_string(s) + ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw cfsense::IoError("cannot open for writing: " + path.string());
    f << "sequence_id,order,r,upep,union_bound\n";
    for (const auto& seq : report.sequences) {
      f << seq.id << ',' << seq.order << ',' << seq.rank << ',' << seq.upep << ','
        << report.union_bound << '\n';
    }
    if (!f) throw cfsense::IoError("write failed: " + path.string());
    std::cout << "snr " << cfg.snr_sweep_db[static_cast<std::size_t>(s)] << " dB: "
              << report.sequences.size() << " error sequences, union bound "
              << report.union_bound << " -> " << path.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative multistatic sensing simulator and solver suite"};
  app.set_version_flag("--version", std::string(cfsense::kVersion) + " (" +
                                        cfsense::kGitDescribe + ")");
  app.require_subcommand(1);

  CommonArgs sim_args, sweep_args, pep_args;
  int snr_index = 0, trial = 0, pep_order = 0;
  bool dump = false;

  CLI::App* sim = app.add_subcommand("simulate", "Run one trial and print a verbose dump");
  add_common(sim, sim_args);
  sim->add_option("--snr-index", snr_index, "Sweep point to simulate");
  sim->add_option("--trial", trial, "Trial id (selects the RNG stream)");
  sim->add_flag("--dump", dump, "Dump the dictionary and observation as .bin files");

  CLI::App* sweep = app.add_subcommand("sweep", "Run the full Monte Carlo experiment");
  add_common(sweep, sweep_args);

  CLI::App* pep = app.add_subcommand("pep", "Bound-only analysis for the configured scene");
  add_common(pep, pep_args);
  pep->add_option("--order", pep_order, "Error-sequence substitution order");

  try {
    app.parse(argc, argv);
    if (sim->parsed()) return cmd_simulate(sim_args, snr_index, trial, dump);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (pep->parsed()) return cmd_pep(pep_args, pep_order);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const cfsense::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const cfsense::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
