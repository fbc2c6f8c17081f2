#pragma once

#include <optional>
#include <string>

#include "routepred/dataset_io.hpp"
#include "routepred/svm.hpp"

namespace routepred::plot {

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
};

enum class MarkerShape { kCircle, kSquare };

struct ClassStyle {
  std::string color;
  MarkerShape shape = MarkerShape::kCircle;
};

struct PlotSpec {
  int width = 800;
  int height = 500;
  ClassStyle route0{"#d62728", MarkerShape::kCircle};  // mainline
  ClassStyle route1{"#1f77b4", MarkerShape::kSquare};  // off-ramp
  bool shade_regions = true;
  std::string boundary_stroke = "#000000";
  double boundary_width = 2.0;
  std::optional<AxisRange> x_range;  // nullopt: fit the data
  std::optional<AxisRange> y_range;
  std::string title;

  /// ConfigError on non-positive dimensions or an empty explicit range.
  void validate() const;
};

/// Standalone SVG: shaded half-planes on either side of the decision line
/// (linear kernels only), one marker per example styled by its true route,
/// and a ring with class="miss" around every misclassified example.
/// Output depends only on the arguments.
///
/// ConfigError (field "shade") when shading is requested for a nonlinear
/// kernel. With shading off, nonlinear models get a scatter plot only.
std::string render_svg(const svm::SvmModel& model, const io::Dataset& data,
                       const PlotSpec& spec);

void write_svg(const svm::SvmModel& model, const io::Dataset& data,
               const PlotSpec& spec, const std::string& path);

}  // namespace routepred::plot
