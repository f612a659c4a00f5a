// SPDX-License-Identifier: Apache-2.0
#include "cfsense/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cfsense/errors.hpp"
#include "text_format.hpp"

namespace cfsense {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(trim(s.substr(start)));
      break;
    }
    out.emplace_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view v, const std::string& where) {
  const std::string s{trim(v)};
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError(where + ": cannot parse '" + s + "' as a number");
  }
  return x;
}

long long parse_ll(std::string_view v, const std::string& where) {
  const std::string s{trim(v)};
  long long x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(where + ": cannot parse '" + s + "' as an integer");
  }
  return x;
}

int parse_int(std::string_view v, const std::string& where) {
  return static_cast<int>(parse_ll(v, where));
}

std::uint64_t parse_u64(std::string_view v, const std::string& where) {
  const std::string s{trim(v)};
  std::uint64_t x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(where + ": cannot parse '" + s + "' as an unsigned integer");
  }
  return x;
}

Vec2 parse_vec2(std::string_view v, const std::string& where) {
  const auto parts = split(v, ',');
  if (parts.size() != 2) throw ConfigError(where + ": expected 'x,y'");
  return {parse_double(parts[0], where), parse_double(parts[1], where)};
}

std::vector<Vec2> parse_vec2_list(std::string_view v, const std::string& where) {
  std::vector<Vec2> out;
  for (const auto& item : split(v, ';')) out.push_back(parse_vec2(item, where));
  return out;
}

std::vector<double> parse_double_list(std::string_view v, const std::string& where) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_double(item, where));
  return out;
}

std::vector<int> parse_int_list(std::string_view v, const std::string& where) {
  std::vector<int> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_int(item, where));
  return out;
}

// "t:<list> r:<list>" slots separated by '|'; RU indices are 0-based.
std::vector<IlluminationSchedule::Slot> parse_slots(std::string_view v,
                                                    const std::string& where) {
  std::vector<IlluminationSchedule::Slot> slots;
  for (const auto& part : split(v, '|')) {
    IlluminationSchedule::Slot slot;
    std::istringstream iss{part};
    std::string tok;
    while (iss >> tok) {
      if (tok.rfind("t:", 0) == 0) {
        slot.transmitters = parse_int_list(tok.substr(2), where);
      } else if (tok.rfind("r:", 0) == 0) {
        slot.receivers = parse_int_list(tok.substr(2), where);
      } else {
        throw ConfigError(where + ": expected 't:<list> r:<list>' per slot");
      }
    }
    slots.push_back(std::move(slot));
  }
  return slots;
}

using Section = std::map<std::string, std::string>;
using RawConfig = std::map<std::string, Section>;

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"scene",
     {"ru_positions", "ru_boresights", "ru_antennas", "ru_beams", "carrier_freq_hz",
      "num_subcarriers", "subcarrier_spacing_hz", "num_slots", "grid_min", "grid_max",
      "grid_nx", "grid_ny", "target_region_min", "target_region_max", "target_rcs"}},
    {"waveform", {"bf_pattern"}},
    {"forward_model", {"schedule", "custom_slots"}},
    {"estimators", {"solvers", "sbl_max_iters", "sbl_tol"}},
    {"detection", {"detector", "cfar_pfa", "cfar_guard", "cfar_train"}},
    {"pep", {"mode", "order"}},
    {"harness",
     {"target_mode", "num_targets_min", "num_targets_max", "snr_sweep_db", "trials",
      "seed", "output_dir", "threads", "tx_power_w", "noise_power_w"}},
};

RawConfig parse_raw(std::string_view text) {
  RawConfig raw;
  std::string current;
  std::size_t line_no = 0;
  std::istringstream in{std::string{text}};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = line;
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) {
      sv = sv.substr(0, hash);
    }
    sv = trim(sv);
    if (sv.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (sv.front() == '[') {
      if (sv.back() != ']') throw ConfigError(where + ": malformed section header");
      current = std::string{trim(sv.substr(1, sv.size() - 2))};
      if (!kKnownKeys.contains(current)) {
        throw ConfigError(where + ": unknown section [" + current + "]");
      }
      raw.try_emplace(current);
      continue;
    }
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    if (current.empty()) throw ConfigError(where + ": key outside any section");
    const std::string key{trim(sv.substr(0, eq))};
    const auto& known = kKnownKeys.at(current);
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(where + ": unknown key '" + key + "' in section [" + current + "]");
    }
    auto [it, inserted] = raw[current].try_emplace(key, trim(sv.substr(eq + 1)));
    if (!inserted) {
      throw ConfigError(where + ": duplicate key '" + key + "' in section [" + current + "]");
    }
  }
  return raw;
}

// Returns the raw value if present, otherwise nullptr.
const std::string* find(const RawConfig& raw, const std::string& sec,
                        const std::string& key) {
  const auto s = raw.find(sec);
  if (s == raw.end()) return nullptr;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  return &k->second;
}

template <typename T, typename Parse>
void maybe_set(const RawConfig& raw, const std::string& sec, const std::string& key,
               T& out, Parse&& parse) {
  if (const std::string* v = find(raw, sec, key)) {
    out = parse(*v, sec + "." + key);
  }
}

}  // namespace

std::string_view to_string(SolverKind k) {
  return k == SolverKind::kSbl ? "sbl" : "omp";
}
std::string_view to_string(DetectorKind k) {
  return k == DetectorKind::kTopL ? "top_l" : "cfar";
}
std::string_view to_string(TargetMode m) {
  return m == TargetMode::kOnGrid ? "on_grid" : "off_grid";
}
std::string_view to_string(BfPattern p) {
  return p == BfPattern::kEqual ? "equal" : "random";
}
std::string_view to_string(ScheduleKind s) {
  return s == ScheduleKind::kRoundRobin ? "round_robin" : "custom";
}

GridSpec ExperimentConfig::make_grid_spec() const {
  return make_grid(grid_min, grid_max, grid_nx, grid_ny);
}

std::vector<RuConfig> ExperimentConfig::make_rus(double tx_power_w) const {
  const int k = num_rus();
  Vec2 centroid = Vec2::Zero();
  for (const auto& p : ru_positions) centroid += p;
  centroid /= static_cast<double>(k);

  std::vector<RuConfig> rus(k);
  for (int i = 0; i < k; ++i) {
    rus[i].position = ru_positions[i];
    if (ru_boresights.empty()) {
      const Vec2 dir = centroid - ru_positions[i];
      if (dir.norm() == 0.0) {
        throw ConfigError("scene.ru_positions: RU " + std::to_string(i) +
                          " sits at the centroid; give explicit boresights");
      }
      rus[i].boresight = dir.normalized();
    } else {
      const double n = ru_boresights[i].norm();
      if (n == 0.0) throw ConfigError("scene.ru_boresights: zero vector");
      rus[i].boresight = ru_boresights[i] / n;
    }
    rus[i].num_antennas = ru_antennas[i];
    rus[i].num_beams = ru_beams[i];
    rus[i].tx_power_w = tx_power_w;
  }
  return rus;
}

void ExperimentConfig::validate() const {
  const int k = num_rus();
  if (k < 2) throw ConfigError("scene.ru_positions: need at least 2 RUs");
  if (!ru_boresights.empty() && static_cast<int>(ru_boresights.size()) != k) {
    throw ConfigError("scene.ru_boresights: must list one per RU or 'centroid'");
  }
  if (static_cast<int>(ru_antennas.size()) != k) {
    throw ConfigError("scene.ru_antennas: must be a scalar or one per RU");
  }
  if (static_cast<int>(ru_beams.size()) != k) {
    throw ConfigError("scene.ru_beams: must be a scalar or one per RU");
  }
  for (int i = 0; i < k; ++i) {
    if (ru_antennas[i] < 1) throw ConfigError("scene.ru_antennas: must be >= 1");
    if (ru_beams[i] < 1 || ru_beams[i] >= ru_antennas[i]) {
      throw ConfigError("scene.ru_beams: requires 1 <= Z < M per RU");
    }
  }
  if (!(carrier_freq_hz > 0.0)) throw ConfigError("scene.carrier_freq_hz: must be positive");
  if (num_subcarriers < 1) throw ConfigError("scene.num_subcarriers: must be >= 1");
  if (!(subcarrier_spacing_hz > 0.0)) {
    throw ConfigError("scene.subcarrier_spacing_hz: must be positive");
  }
  if (num_slots < 1) throw ConfigError("scene.num_slots: must be >= 1");
  if (grid_nx < 1 || grid_ny < 1) throw ConfigError("scene.grid_nx/grid_ny: must be >= 1");
  if (!(grid_min.x() < grid_max.x()) || !(grid_min.y() < grid_max.y())) {
    throw ConfigError("scene.grid_min/grid_max: min must be strictly below max");
  }
  if (!(target_region_min.x() <= target_region_max.x()) ||
      !(target_region_min.y() <= target_region_max.y())) {
    throw ConfigError("scene.target_region_min/max: malformed region");
  }
  if (!(target_rcs >= 0.0)) throw ConfigError("scene.target_rcs: must be nonnegative");

  // Surfaces slot errors (overlap, coverage, empty sides) at parse time.
  make_schedule(schedule, k, num_slots,
                schedule == ScheduleKind::kCustom ? custom_slots
                                                  : std::vector<IlluminationSchedule::Slot>{});

  if (solvers.empty()) throw ConfigError("estimators.solvers: need at least one solver");
  for (std::size_t a = 0; a < solvers.size(); ++a) {
    for (std::size_t b = a + 1; b < solvers.size(); ++b) {
      if (solvers[a] == solvers[b]) throw ConfigError("estimators.solvers: duplicate solver");
    }
  }
  if (sbl_max_iters < 1) throw ConfigError("estimators.sbl_max_iters: must be >= 1");
  if (!(sbl_tol > 0.0)) throw ConfigError("estimators.sbl_tol: must be positive");

  if (detector == DetectorKind::kCfar) {
    if (!(cfar_pfa > 0.0 && cfar_pfa < 1.0)) {
      throw ConfigError("detection.cfar_pfa: must be in (0, 1)");
    }
    if (cfar_guard < 0) throw ConfigError("detection.cfar_guard: must be >= 0");
    if (cfar_train < 1) throw ConfigError("detection.cfar_train: must be >= 1");
    const int w = 2 * (cfar_guard + cfar_train) + 1;
    if (w > grid_nx || w > grid_ny) {
      throw ConfigError("detection.cfar_guard/train: window larger than the grid");
    }
    if (std::find(solvers.begin(), solvers.end(), SolverKind::kOmp) != solvers.end()) {
      throw ConfigError("detection.detector: cfar requires known sparsity per solver; "
                        "it applies to sbl only, drop omp from estimators.solvers");
    }
    if (target_mode == TargetMode::kOffGrid) {
      throw ConfigError("detection.detector: cfar is scored on grid indices; "
                        "use harness.target_mode = on_grid");
    }
  }

  if (pep_order < 0) throw ConfigError("pep.order: must be >= 1 when enabled");
  if (pep_order > 0 && target_mode == TargetMode::kOffGrid) {
    throw ConfigError("pep.mode: bounds are defined for the matched on-grid model; "
                      "use harness.target_mode = on_grid");
  }

  const int q = grid_nx * grid_ny;
  if (num_targets_min < 1 || num_targets_min > num_targets_max) {
    throw ConfigError("harness.num_targets_min/max: need 1 <= min <= max");
  }
  if (num_targets_max > q) {
    throw ConfigError("harness.num_targets_max: exceeds the grid size");
  }
  if (target_mode == TargetMode::kOnGrid) {
    int eligible = 0;
    for (const Vec2& p : make_grid_spec().points) {
      if (p.x() >= target_region_min.x() && p.x() <= target_region_max.x() &&
          p.y() >= target_region_min.y() && p.y() <= target_region_max.y()) {
        ++eligible;
      }
    }
    if (eligible < num_targets_max) {
      throw ConfigError("harness.num_targets_max: only " + std::to_string(eligible) +
                        " grid points fall inside the target region");
    }
  } else {
    if (!(target_region_min.x() < target_region_max.x()) ||
        !(target_region_min.y() < target_region_max.y())) {
      throw ConfigError("scene.target_region_min/max: off-grid draws need a nonempty region");
    }
  }
  if (snr_sweep_db.empty()) throw ConfigError("harness.snr_sweep_db: must be nonempty");
  if (trials < 1) throw ConfigError("harness.trials: must be >= 1");
  if (threads < 0) throw ConfigError("harness.threads: must be >= 0");
  if (abs_tx_power_w.has_value() != abs_noise_power_w.has_value()) {
    throw ConfigError("harness.tx_power_w/noise_power_w: set both or neither");
  }
  if (abs_tx_power_w) {
    if (!(*abs_tx_power_w > 0.0) || !(*abs_noise_power_w > 0.0)) {
      throw ConfigError("harness.tx_power_w/noise_power_w: must be positive");
    }
    if (snr_sweep_db.size() != 1) {
      throw ConfigError("harness.snr_sweep_db: absolute power mode takes exactly one "
                        "sweep label");
    }
  }
}

std::string ExperimentConfig::echo() const {
  using detail::fmt_double;
  std::string s;
  auto line = [&s](std::string_view key, const std::string& value) {
    s += key;
    s += " = ";
    s += value;
    s += '\n';
  };
  auto vec2 = [](const Vec2& v) {
    return detail::fmt_double(v.x()) + "," + detail::fmt_double(v.y());
  };
  auto join = [](const auto& items, char sep, auto&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += sep;
      out += fmt(items[i]);
    }
    return out;
  };

  line("scene.ru_positions", join(ru_positions, ';', vec2));
  line("scene.ru_boresights",
       ru_boresights.empty() ? "centroid" : join(ru_boresights, ';', vec2));
  line("scene.ru_antennas",
       join(ru_antennas, ',', [](int v) { return std::to_string(v); }));
  line("scene.ru_beams", join(ru_beams, ',', [](int v) { return std::to_string(v); }));
  line("scene.carrier_freq_hz", fmt_double(carrier_freq_hz));
  line("scene.num_subcarriers", std::to_string(num_subcarriers));
  line("scene.subcarrier_spacing_hz", fmt_double(subcarrier_spacing_hz));
  line("scene.num_slots", std::to_string(num_slots));
  line("scene.grid_min", vec2(grid_min));
  line("scene.grid_max", vec2(grid_max));
  line("scene.grid_nx", std::to_string(grid_nx));
  line("scene.grid_ny", std::to_string(grid_ny));
  line("scene.target_region_min", vec2(target_region_min));
  line("scene.target_region_max", vec2(target_region_max));
  line("scene.target_rcs", fmt_double(target_rcs));
  line("waveform.bf_pattern", std::string{to_string(bf_pattern)});
  line("forward_model.schedule", std::string{to_string(schedule)});
  if (schedule == ScheduleKind::kCustom) {
    line("forward_model.custom_slots",
         join(custom_slots, '|', [](const IlluminationSchedule::Slot& slot) {
           auto ints = [](const std::vector<int>& v) {
             std::string out;
             for (std::size_t i = 0; i < v.size(); ++i) {
               if (i) out += ',';
               out += std::to_string(v[i]);
             }
             return out;
           };
           return "t:" + ints(slot.transmitters) + " r:" + ints(slot.receivers);
         }));
  }
  line("estimators.solvers", join(solvers, ',', [](SolverKind k) {
         return std::string{to_string(k)};
       }));
  line("estimators.sbl_max_iters", std::to_string(sbl_max_iters));
  line("estimators.sbl_tol", fmt_double(sbl_tol));
  line("detection.detector", std::string{to_string(detector)});
  line("detection.cfar_pfa", fmt_double(cfar_pfa));
  line("detection.cfar_guard", std::to_string(cfar_guard));
  line("detection.cfar_train", std::to_string(cfar_train));
  line("pep.mode", pep_order > 0 ? "on" : "off");
  line("pep.order", std::to_string(pep_order));
  line("harness.target_mode", std::string{to_string(target_mode)});
  line("harness.num_targets_min", std::to_string(num_targets_min));
  line("harness.num_targets_max", std::to_string(num_targets_max));
  line("harness.snr_sweep_db", join(snr_sweep_db, ',', fmt_double));
  line("harness.trials", std::to_string(trials));
  line("harness.seed", detail::fmt_u64(seed));
  line("harness.output_dir", output_dir.string());
  if (abs_tx_power_w) {
    line("harness.tx_power_w", fmt_double(*abs_tx_power_w));
    line("harness.noise_power_w", fmt_double(*abs_noise_power_w));
  }
  return s;
}

std::uint64_t ExperimentConfig::hash() const { return detail::fnv1a(echo()); }

ExperimentConfig parse_config_text(std::string_view text) {
  const RawConfig raw = parse_raw(text);
  ExperimentConfig cfg;

  maybe_set(raw, "scene", "ru_positions", cfg.ru_positions, parse_vec2_list);
  if (const std::string* v = find(raw, "scene", "ru_boresights")) {
    if (trim(*v) == "centroid") {
      cfg.ru_boresights.clear();
    } else {
      cfg.ru_boresights = parse_vec2_list(*v, "scene.ru_boresights");
    }
  }
  const int k = cfg.num_rus();
  auto per_ru = [k](const std::string& v, const std::string& where) {
    std::vector<int> list = parse_int_list(v, where);
    if (list.size() == 1) list.assign(static_cast<std::size_t>(k), list[0]);
    return list;
  };
  cfg.ru_antennas.assign(static_cast<std::size_t>(k), 16);
  cfg.ru_beams.assign(static_cast<std::size_t>(k), 10);
  maybe_set(raw, "scene", "ru_antennas", cfg.ru_antennas, per_ru);
  maybe_set(raw, "scene", "ru_beams", cfg.ru_beams, per_ru);
  maybe_set(raw, "scene", "carrier_freq_hz", cfg.carrier_freq_hz, parse_double);
  maybe_set(raw, "scene", "num_subcarriers", cfg.num_subcarriers, parse_int);
  maybe_set(raw, "scene", "subcarrier_spacing_hz", cfg.subcarrier_spacing_hz, parse_double);
  maybe_set(raw, "scene", "num_slots", cfg.num_slots, parse_int);
  maybe_set(raw, "scene", "grid_min", cfg.grid_min, parse_vec2);
  maybe_set(raw, "scene", "grid_max", cfg.grid_max, parse_vec2);
  maybe_set(raw, "scene", "grid_nx", cfg.grid_nx, parse_int);
  maybe_set(raw, "scene", "grid_ny", cfg.grid_ny, parse_int);
  cfg.target_region_min = cfg.grid_min;
  cfg.target_region_max = cfg.grid_max;
  maybe_set(raw, "scene", "target_region_min", cfg.target_region_min, parse_vec2);
  maybe_set(raw, "scene", "target_region_max", cfg.target_region_max, parse_vec2);
  maybe_set(raw, "scene", "target_rcs", cfg.target_rcs, parse_double);

  maybe_set(raw, "waveform", "bf_pattern", cfg.bf_pattern,
            [](const std::string& v, const std::string& where) {
              if (v == "equal") return BfPattern::kEqual;
              if (v == "random") return BfPattern::kRandom;
              throw ConfigError(where + ": expected 'equal' or 'random'");
            });

  maybe_set(raw, "forward_model", "schedule", cfg.schedule,
            [](const std::string& v, const std::string& where) {
              if (v == "round_robin") return ScheduleKind::kRoundRobin;
              if (v == "custom") return ScheduleKind::kCustom;
              throw ConfigError(where + ": expected 'round_robin' or 'custom'");
            });
  maybe_set(raw, "forward_model", "custom_slots", cfg.custom_slots, parse_slots);

  maybe_set(raw, "estimators", "solvers", cfg.solvers,
            [](const std::string& v, const std::string& where) {
              std::vector<SolverKind> out;
              for (const auto& item : split(v, ',')) {
                if (item == "sbl") {
                  out.push_back(SolverKind::kSbl);
                } else if (item == "omp") {
                  out.push_back(SolverKind::kOmp);
                } else {
                  throw ConfigError(where + ": unknown solver '" + item + "'");
                }
              }
              return out;
            });
  maybe_set(raw, "estimators", "sbl_max_iters", cfg.sbl_max_iters, parse_int);
  maybe_set(raw, "estimators", "sbl_tol", cfg.sbl_tol, parse_double);

  maybe_set(raw, "detection", "detector", cfg.detector,
            [](const std::string& v, const std::string& where) {
              if (v == "top_l") return DetectorKind::kTopL;
              if (v == "cfar") return DetectorKind::kCfar;
              throw ConfigError(where + ": expected 'top_l' or 'cfar'");
            });
  maybe_set(raw, "detection", "cfar_pfa", cfg.cfar_pfa, parse_double);
  maybe_set(raw, "detection", "cfar_guard", cfg.cfar_guard, parse_int);
  maybe_set(raw, "detection", "cfar_train", cfg.cfar_train, parse_int);

  bool pep_on = false;
  maybe_set(raw, "pep", "mode", pep_on,
            [](const std::string& v, const std::string& where) {
              if (v == "off") return false;
              if (v == "on") return true;
              throw ConfigError(where + ": expected 'off' or 'on'");
            });
  int pep_order = 1;
  maybe_set(raw, "pep", "order", pep_order, parse_int);
  if (pep_on && pep_order < 1) throw ConfigError("pep.order: must be >= 1 when enabled");
  cfg.pep_order = pep_on ? pep_order : 0;

  maybe_set(raw, "harness", "target_mode", cfg.target_mode,
            [](const std::string& v, const std::string& where) {
              if (v == "on_grid") return TargetMode::kOnGrid;
              if (v == "off_grid") return TargetMode::kOffGrid;
              throw ConfigError(where + ": expected 'on_grid' or 'off_grid'");
            });
  maybe_set(raw, "harness", "num_targets_min", cfg.num_targets_min, parse_int);
  maybe_set(raw, "harness", "num_targets_max", cfg.num_targets_max, parse_int);
  maybe_set(raw, "harness", "snr_sweep_db", cfg.snr_sweep_db, parse_double_list);
  maybe_set(raw, "harness", "trials", cfg.trials, parse_int);
  maybe_set(raw, "harness", "seed", cfg.seed, parse_u64);
  maybe_set(raw, "harness", "output_dir", cfg.output_dir,
            [](const std::string& v, const std::string&) {
              return std::filesystem::path{v};
            });
  maybe_set(raw, "harness", "threads", cfg.threads, parse_int);
  if (const std::string* v = find(raw, "harness", "tx_power_w")) {
    cfg.abs_tx_power_w = parse_double(*v, "harness.tx_power_w");
  }
  if (const std::string* v = find(raw, "harness", "noise_power_w")) {
    cfg.abs_noise_power_w = parse_double(*v, "harness.noise_power_w");
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return parse_config_text(buf.str());
}

}  // namespace cfsense
