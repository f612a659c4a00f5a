// SPDX-License-Identifier: Apache-2.0
#include "cfsense/scene.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cfsense/errors.hpp"

namespace cfsense {

void RuConfig::validate() const {
  if (std::abs(boresight.norm() - 1.0) > 1e-12) {
    throw ConfigError("RU boresight must be a unit vector");
  }
  if (num_antennas < 1) {
    throw ConfigError("RU antenna count must be positive");
  }
  if (num_beams < 1 || num_beams >= num_antennas) {
    throw ConfigError("RU beam count must satisfy 1 <= Z < M, got Z=" +
                      std::to_string(num_beams) + " M=" + std::to_string(num_antennas));
  }
  if (!(tx_power_w > 0.0)) {
    throw ConfigError("RU transmit power must be positive");
  }
}

void Scene::validate() const {
  if (rus.empty()) throw ConfigError("scene has no RUs");
  for (const auto& ru : rus) ru.validate();
  for (std::size_t a = 0; a < rus.size(); ++a) {
    for (std::size_t b = a + 1; b < rus.size(); ++b) {
      if (rus[a].position == rus[b].position) {
        throw ConfigError("RU positions must be distinct");
      }
    }
  }
  for (const auto& t : targets) {
    if (!(t.rcs >= 0.0)) throw ConfigError("target RCS must be nonnegative");
  }
  for (std::size_t a = 0; a < targets.size(); ++a) {
    for (std::size_t b = a + 1; b < targets.size(); ++b) {
      if (targets[a].position == targets[b].position) {
        throw ConfigError("target positions must be distinct");
      }
    }
  }
  if (!(carrier_freq_hz > 0.0)) throw ConfigError("carrier frequency must be positive");
  if (num_subcarriers < 1) throw ConfigError("subcarrier count must be positive");
  if (!(subcarrier_spacing_hz > 0.0)) throw ConfigError("subcarrier spacing must be positive");
  if (!(noise_power_w > 0.0)) throw ConfigError("noise power must be positive");
  if (num_slots < 1) throw ConfigError("slot count must be positive");
}

std::vector<Vec2> build_grid(const GridSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1) {
    throw ConfigError("grid dimensions must be at least 1x1");
  }
  if (!(spec.corner_min.x() < spec.corner_max.x()) ||
      !(spec.corner_min.y() < spec.corner_max.y())) {
    throw ConfigError("grid corner_min must be strictly below corner_max componentwise");
  }
  std::vector<Vec2> points;
  points.reserve(static_cast<std::size_t>(spec.nx) * spec.ny);
  // Convex-combination form keeps every point inside the rectangle and the
  // endpoints exact.
  for (int iy = 0; iy < spec.ny; ++iy) {
    const double ty = spec.ny == 1 ? 0.0 : static_cast<double>(iy) / (spec.ny - 1);
    const double y = spec.corner_min.y() * (1.0 - ty) + spec.corner_max.y() * ty;
    for (int ix = 0; ix < spec.nx; ++ix) {
      const double tx = spec.nx == 1 ? 0.0 : static_cast<double>(ix) / (spec.nx - 1);
      const double x = spec.corner_min.x() * (1.0 - tx) + spec.corner_max.x() * tx;
      points.emplace_back(x, y);
    }
  }
  return points;
}

GridSpec make_grid(const Vec2& corner_min, const Vec2& corner_max, int nx, int ny) {
  GridSpec spec;
  spec.corner_min = corner_min;
  spec.corner_max = corner_max;
  spec.nx = nx;
  spec.ny = ny;
  spec.points = build_grid(spec);
  return spec;
}

double distance(const Vec2& p, const Vec2& q) { return (p - q).norm(); }

double relative_angle(const RuConfig& ru, const Vec2& point) {
  const Vec2 d = point - ru.position;
  if (d.x() == 0.0 && d.y() == 0.0) {
    throw std::domain_error("relative_angle: point coincides with the RU position");
  }
  const double cross = ru.boresight.x() * d.y() - ru.boresight.y() * d.x();
  const double dot = ru.boresight.dot(d);
  double angle = std::atan2(cross, dot);
  if (angle == -std::numbers::pi) angle = std::numbers::pi;  // range (-pi, pi]
  return angle;
}

double bistatic_delay(const RuConfig& illuminator, const RuConfig& receiver,
                      const Vec2& point) {
  const double di = distance(illuminator.position, point);
  const double dk = distance(receiver.position, point);
  return (di + dk) / kSpeedOfLight;
}

double bistatic_pathloss(const RuConfig& illuminator, const RuConfig& receiver,
                         const Vec2& point, double wavelength) {
  const double di = distance(illuminator.position, point);
  const double dk = distance(receiver.position, point);
  if (di == 0.0 || dk == 0.0) {
    throw std::domain_error("bistatic_pathloss: point collocated with an RU");
  }
  const double four_pi_cubed = 64.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi;
  return wavelength * wavelength / (four_pi_cubed * di * di * dk * dk);
}

PathParams path_params(const RuConfig& illuminator, const RuConfig& receiver,
                       const Vec2& point, double wavelength) {
  PathParams pp;
  pp.aod = relative_angle(illuminator, point);
  pp.aoa = relative_angle(receiver, point);
  pp.delay = bistatic_delay(illuminator, receiver, point);
  pp.pathloss = bistatic_pathloss(illuminator, receiver, point, wavelength);
  return pp;
}

}  // namespace cfsense
