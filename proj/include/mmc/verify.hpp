#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mmc/channel.hpp"

// Randomized invariant suite run by `mmc verify`, plus the generators it
// shares with the tests.
namespace mmc::verify {

/// Random distribution of size n. With ties, entries are multiples of 1/8
/// (zeros allowed), which produces equal channel values and empty supports.
std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n, bool ties = false);

Channel random_channel(std::mt19937_64& rng, std::size_t nx, std::size_t ny, bool ties = false);

struct PropertyResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string reproduction;  // first failure only

  bool ok() const { return failed == 0; }
};

struct Options {
  std::uint64_t seed = 1;
  std::size_t count = 50;
  TolerancePolicy tol;
  /// Test-only: comparisons use a negative tolerance so every check fails.
  bool inject_fault = false;
};

/// Runs every property on `count` instances. Instance k draws from a
/// generator seeded with seed + k, so a reproduction line is enough to replay it.
std::vector<PropertyResult> run(const Options& opts);

}  // namespace mmc::verify
