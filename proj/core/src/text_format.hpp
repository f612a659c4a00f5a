// SPDX-License-Identifier: Apache-2.0
//
// Internal helpers for deterministic text output. Doubles are printed with
// the shortest round-trip representation so emitted CSV parses back exactly.
#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

namespace cfsense::detail {

inline std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

// FNV-1a over bytes; used for the config provenance hash.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace cfsense::detail
