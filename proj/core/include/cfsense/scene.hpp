// SPDX-License-Identifier: Apache-2.0
//
// Global 2D geometry of the cell-free sensing network: radio units (RUs),
// point targets and the rectangular search grid, plus the per-path geometric
// quantities (distance, angle, bistatic delay, bistatic pathloss) everything
// downstream is built from.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace cfsense {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s, exact

using Vec2 = Eigen::Vector2d;

/// One radio unit: a half-wavelength ULA at a fixed position with a unit
/// boresight vector, Z < M beamforming directions and total transmit power P.
struct RuConfig {
  Vec2 position = Vec2::Zero();   // meters
  Vec2 boresight = Vec2(1.0, 0.0);
  int num_antennas = 1;           // M_k
  int num_beams = 1;              // Z_k, 1 <= Z_k < M_k
  double tx_power_w = 1.0;        // P_k

  void validate() const;  // throws ConfigError
};

struct Target {
  Vec2 position = Vec2::Zero();  // meters
  double rcs = 0.0;              // variance of the reflection coefficient, linear
};

/// Regular nx-by-ny grid over [corner_min, corner_max], endpoints included.
/// Points are row-major with x fastest: index q = iy*nx + ix.
struct GridSpec {
  Vec2 corner_min = Vec2::Zero();
  Vec2 corner_max = Vec2::Ones();
  int nx = 1;
  int ny = 1;
  std::vector<Vec2> points;

  int size() const { return nx * ny; }
  int flat_index(int ix, int iy) const { return iy * nx + ix; }
};

std::vector<Vec2> build_grid(const GridSpec& spec);

/// Convenience constructor that fills GridSpec::points.
GridSpec make_grid(const Vec2& corner_min, const Vec2& corner_max, int nx, int ny);

/// Immutable after construction; safe for concurrent reads from Monte Carlo
/// workers.
struct Scene {
  std::vector<RuConfig> rus;
  std::vector<Target> targets;
  GridSpec grid;
  double carrier_freq_hz = 10e9;
  int num_subcarriers = 16;              // N
  double subcarrier_spacing_hz = 10e6;   // delta f
  double noise_power_w = 1.0;            // N0
  int num_slots = 3;                     // S

  double wavelength() const { return kSpeedOfLight / carrier_freq_hz; }
  void validate() const;  // throws ConfigError
};

/// Per (illuminator, receiver, point) path quantities.
struct PathParams {
  double aod = 0.0;       // radians at the illuminator, in (-pi, pi]
  double aoa = 0.0;       // radians at the receiver, in (-pi, pi]
  double delay = 0.0;     // seconds
  double pathloss = 0.0;  // dimensionless
  std::complex<double> beam_gain = 0.0;  // filled by the forward model
};

double distance(const Vec2& p, const Vec2& q);

/// Signed angle from ru.boresight to the direction of `point`, positive
/// counterclockwise, in (-pi, pi]. Throws std::domain_error if the point
/// coincides with the RU position.
double relative_angle(const RuConfig& ru, const Vec2& point);

double bistatic_delay(const RuConfig& illuminator, const RuConfig& receiver,
                      const Vec2& point);

/// lambda^2 / ((4 pi)^3 d_i^2 d_k^2). Throws std::domain_error when the point
/// is collocated with either RU.
double bistatic_pathloss(const RuConfig& illuminator, const RuConfig& receiver,
                         const Vec2& point, double wavelength);

/// Angles, delay and pathloss for one bistatic path in a single call.
PathParams path_params(const RuConfig& illuminator, const RuConfig& receiver,
                       const Vec2& point, double wavelength);

}  // namespace cfsense
