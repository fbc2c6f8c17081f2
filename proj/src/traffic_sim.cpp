#include "routepred/traffic_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "routepred/errors.hpp"
#include "routepred/random.hpp"

namespace routepred::sim {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(field, what);
}

bool finite(double v) { return std::isfinite(v); }

std::string vehicle_id(std::size_t index, std::size_t count) {
  std::string digits = std::to_string(index);
  const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "veh" + digits;
}

}  // namespace

void ScenarioConfig::validate() const {
  require(num_vehicles >= 1, "num_vehicles", "must be at least 1");
  require(num_steps >= 1, "num_steps", "must be at least 1");
  require(std::all_of(lane_y.begin(), lane_y.end(), finite), "lane_y",
          "must be finite");
  require(lane_y[0] > lane_y[1] && lane_y[1] > lane_y[2], "lane_y",
          "must be strictly decreasing");
  require(finite(junction_x), "junction_x", "must be finite");
  require(finite(ramp_end.x) && finite(ramp_end.y), "ramp_end",
          "must be finite");
  require(ramp_end.y < lane_y[2], "ramp_end",
          "ordinate must lie below the lowest lane");
  require(ramp_end.x > junction_x, "ramp_end",
          "abscissa must lie beyond junction_x");
  require(finite(speed_range.lo) && finite(speed_range.hi), "speed_range",
          "must be finite");
  require(speed_range.lo > 0.0, "speed_range", "lower bound must be positive");
  require(speed_range.lo <= speed_range.hi, "speed_range", "must be nonempty");
  require(route2_probability >= 0.0 && route2_probability <= 1.0,
          "route2_probability", "must lie in [0, 1]");
  require(finite(spawn_x), "spawn_x", "must be finite");
  require(finite(spawn_spacing) && spawn_spacing > 0.0, "spawn_spacing",
          "must be positive");
  require(finite(lane_noise) && lane_noise >= 0.0, "lane_noise",
          "must be non-negative");
}

bool canonical_less(const TrajectoryPoint& a, const TrajectoryPoint& b) {
  return std::tie(a.step, a.vehicle_id) < std::tie(b.step, b.vehicle_id);
}

void validate_trace(const Trace& trace) {
  struct Span {
    std::size_t first, last, count;
    Route route;
  };
  std::map<std::string, Span, std::less<>> spans;
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    const auto& p = trace.points[i];
    if (i > 0 && !canonical_less(trace.points[i - 1], p)) {
      throw DataError("trace points out of canonical order or duplicated at " +
                      p.vehicle_id + " step " + std::to_string(p.step));
    }
    if (trace.config && p.step >= trace.config->num_steps) {
      throw DataError("step " + std::to_string(p.step) +
                      " beyond scenario num_steps");
    }
    auto [it, inserted] = spans.try_emplace(p.vehicle_id,
                                            Span{p.step, p.step, 1, p.route});
    if (!inserted) {
      Span& s = it->second;
      if (s.route != p.route) {
        throw DataError("vehicle " + p.vehicle_id + " changes route label");
      }
      s.first = std::min(s.first, p.step);
      s.last = std::max(s.last, p.step);
      ++s.count;
    }
  }
  for (const auto& [id, s] : spans) {
    if (s.last - s.first + 1 != s.count) {
      throw DataError("vehicle " + id + " has a non-contiguous step range");
    }
  }
}

double ramp_y(const ScenarioConfig& config, std::size_t lane_index, double x) {
  const double y0 = config.lane_y[lane_index];
  if (x < config.junction_x) return y0;
  if (x >= config.ramp_end.x) return config.ramp_end.y;
  const double t = (x - config.junction_x) / (config.ramp_end.x - config.junction_x);
  const double h = t * t * (3.0 - 2.0 * t);
  return y0 + (config.ramp_end.y - y0) * h;
}

Point2 vehicle_position(const ScenarioConfig& config, Route route,
                        std::size_t lane_index, double speed, std::size_t step,
                        double spawn_x) {
  const double x = spawn_x + speed * static_cast<double>(step);
  if (route == Route::kMainline) return {x, config.lane_y[lane_index]};
  return {x, ramp_y(config, lane_index, x)};
}

Trace generate_trace(const ScenarioConfig& config) {
  config.validate();
  Rng rng(config.rng_seed);

  Trace trace;
  trace.config = config;
  trace.points.reserve(config.num_vehicles * config.num_steps);
  for (std::size_t v = 0; v < config.num_vehicles; ++v) {
    const Route route = rng.bernoulli(config.route2_probability)
                            ? Route::kOffRamp
                            : Route::kMainline;
    const auto lane = static_cast<std::size_t>(rng.below(config.lane_y.size()));
    const double speed = rng.uniform(config.speed_range.lo, config.speed_range.hi);
    const double spawn_x =
        config.spawn_x - static_cast<double>(v) * config.spawn_spacing;
    const std::string id = vehicle_id(v, config.num_vehicles);
    for (std::size_t step = 0; step < config.num_steps; ++step) {
      const Point2 p = vehicle_position(config, route, lane, speed, step, spawn_x);
      const double jitter = rng.uniform(-config.lane_noise, config.lane_noise);
      trace.points.push_back({id, step, p.x, p.y + jitter, speed, route});
    }
  }
  std::sort(trace.points.begin(), trace.points.end(), canonical_less);
  return trace;
}

}  // namespace routepred::sim
