#pragma once

// Quasi-random interior points: Halton sequence with a seeded
// Cranley-Patterson rotation, so the same seed gives the same points.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vstatic/errors.hpp"
#include "vstatic/finite_difference.hpp"
#include "vstatic/tensor.hpp"

namespace vstatic {

inline constexpr std::uint64_t kDefaultSeed = 20250917;

/// Smallest distance from the chart boundary; see sampling_margin for the plan-dependent value.
inline constexpr double kSampleMargin = 0.1;

/// VSTATIC_SEED if set to an integer, else the default.
inline std::uint64_t seed_from_env() {
  const char* s = std::getenv("VSTATIC_SEED");
  if (s == nullptr || *s == '\0') return kDefaultSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  require(end != nullptr && *end == '\0', "VSTATIC_SEED must be a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

/// `count` points in the box shrunk by `margin` on every side.
inline std::vector<Point> sample_points(std::span<const Interval> domain, int count, std::uint64_t seed,
                                        double margin = kSampleMargin) {
  static constexpr std::array<std::uint64_t, kMaxDim> primes{2, 3, 5, 7, 11, 13, 17, 19};
  const auto n = domain.size();
  require(n >= 1 && n <= kMaxDim, "sampling dimension must lie in [1, 8]");
  require(count >= 0, "point count must be non-negative");
  for (const auto& iv : domain) require(iv.width() > 2.0 * margin, "domain too small for sampling margin");

  std::mt19937_64 rng(seed);
  std::vector<double> shift(n);
  for (auto& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;

  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::vector<double> x(n);
    for (std::size_t d = 0; d < n; ++d) {
      double u = radical_inverse(static_cast<std::uint64_t>(k) + 1, primes[d]) + shift[d];
      u -= std::floor(u);
      x[d] = domain[d].lo + margin + u * (domain[d].width() - 2.0 * margin);
    }
    out.emplace_back(std::move(x));
  }
  return out;
}

}  // namespace vstatic
