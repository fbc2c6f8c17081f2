#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "routepred/traffic_sim.hpp"

namespace routepred::cli {

/// Sampling seed used when --seed is not given.
inline constexpr std::uint64_t kDefaultSeed = 7;
inline constexpr std::size_t kDefaultTrainSize = 400;

/// Exit codes shared by every command.
enum ExitCode : int { kOk = 0, kIoFailure = 1, kUsage = 2, kDataFailure = 3 };

/// Runs one command. `args` excludes the program name. Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// key=value lines named after ScenarioConfig fields, applied over `base`.
/// `#` starts a comment. lane_y takes three comma-separated values; the
/// ramp end and speed range are split into ramp_end_x/ramp_end_y and
/// speed_min/speed_max. ConfigError names the offending key.
sim::ScenarioConfig parse_scenario_config(std::istream& in,
                                          sim::ScenarioConfig base = {});

/// `first:last:step` (inclusive) or a comma-separated list.
std::vector<std::size_t> parse_test_sizes(std::string_view spec);

}  // namespace routepred::cli
