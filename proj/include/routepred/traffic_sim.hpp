#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace routepred::sim {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Route taken at the junction. The numeric values are the labels written
/// to trace files: 0 keeps to the mainline, 1 takes the right-hand off-ramp.
enum class Route : std::uint8_t { kMainline = 0, kOffRamp = 1 };

struct SpeedRange {
  double lo = 20.0;
  double hi = 35.0;
  friend bool operator==(const SpeedRange&, const SpeedRange&) = default;
};

/// Highway with three one-direction lanes and a right-hand off-ramp.
/// Distances are meters, speeds meters per step.
struct ScenarioConfig {
  std::size_t num_vehicles = 600;
  std::size_t num_steps = 100;
  std::array<double, 3> lane_y{0.0, -0.5, -1.0};  // strictly decreasing
  double junction_x = 200.0;
  Point2 ramp_end{260.0, -2.0};
  SpeedRange speed_range{};
  double route2_probability = 0.5;
  double spawn_x = 0.0;         // spawn abscissa of vehicle 0
  double spawn_spacing = 0.3;   // vehicle i spawns at spawn_x - i * spacing
  double lane_noise = 0.05;     // half-width of the uniform jitter added to y
  std::uint64_t rng_seed = 7;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct TrajectoryPoint {
  std::string vehicle_id;
  std::size_t step = 0;
  double x = 0.0;
  double y = 0.0;
  double speed = 0.0;
  Route route = Route::kMainline;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

/// A simulation run. `config` is set for generated traces and empty for
/// imported ones. Points are kept in canonical (step, vehicle_id) order.
struct Trace {
  std::optional<ScenarioConfig> config;
  std::vector<TrajectoryPoint> points;
};

/// Canonical ordering of points: by step, then vehicle_id.
bool canonical_less(const TrajectoryPoint& a, const TrajectoryPoint& b);

/// Checks the trace invariants (canonical order, unique (vehicle, step),
/// contiguous step ranges, constant route per vehicle). Throws DataError.
void validate_trace(const Trace& trace);

/// Ordinate of the noiseless off-ramp path at abscissa x for a vehicle that
/// entered it from `lane_index`. Cubic Hermite with zero end slopes between
/// (junction_x, lane_y) and ramp_end; constant lane_y before and constant
/// ramp_end.y after.
double ramp_y(const ScenarioConfig& config, std::size_t lane_index, double x);

/// Noiseless position of a vehicle. Pure function of its arguments.
Point2 vehicle_position(const ScenarioConfig& config, Route route,
                        std::size_t lane_index, double speed, std::size_t step,
                        double spawn_x);

inline Point2 vehicle_position(const ScenarioConfig& config, Route route,
                               std::size_t lane_index, double speed,
                               std::size_t step) {
  return vehicle_position(config, route, lane_index, speed, step,
                          config.spawn_x);
}

/// Runs the scenario.
///
/// Draw order per vehicle (vehicles in index order): route, lane, speed,
/// then one y-jitter value per step. Vehicle ids are `veh` followed by the
/// zero-padded index, so lexicographic id order equals index order.
Trace generate_trace(const ScenarioConfig& config);

}  // namespace routepred::sim
