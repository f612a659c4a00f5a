// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace cfsense {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Derives an independent stream from (seed, a, b); the harness uses
/// a = SNR index, b = trial id so results never depend on scheduling order.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t a = 0,
                                std::uint64_t b = 0) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ (a + 0x9e3779b97f4a7c15ull));
  s = splitmix64(s ^ (b + 0x517cc1b727220a95ull));
  return std::mt19937_64(s);
}

/// One draw from CN(0, variance): real and imaginary parts are independent
/// N(0, variance/2). A fresh distribution per call keeps the stream
/// consumption independent of any internal caching.
inline std::complex<double> complex_normal(std::mt19937_64& rng, double variance) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace cfsense
