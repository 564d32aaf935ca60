#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "margin_guard/counterexamples.hpp"
#include "margin_guard/geometry.hpp"

namespace margin_guard::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvariant = 3;

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr const char* kSeedEnvVar = "MARGIN_GUARD_SEED";

struct PresetData {
  PointConfig points;
  CenterSet centers;
  std::optional<CounterexampleFixture> fixture;
};

/// n points c_l + xi with l uniform over {(-1,0), (1,0)} and xi ~ N(0, sigma0^2 I_2).
/// Each index draws from its own stream of `seed`.
PresetData two_gaussians_preset(std::size_t n, double sigma0, std::uint64_t seed);

/// Runs one command line (args excludes the program name). Output goes to
/// `out` unless --out is given; diagnostics go to `err`. Returns the process
/// exit code: 0 success, 2 input/usage error, 3 internal invariant violation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace margin_guard::cli
