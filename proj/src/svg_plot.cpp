#include "routepred/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "routepred/errors.hpp"
#include "routepred/text.hpp"

namespace routepred::plot {

void PlotSpec::validate() const {
  if (width <= 0) throw ConfigError("width", "must be positive");
  if (height <= 0) throw ConfigError("height", "must be positive");
  const auto check = [](const std::optional<AxisRange>& r, const char* field) {
    if (r && !(r->lo < r->hi)) throw ConfigError(field, "range must satisfy lo < hi");
  };
  check(x_range, "x_range");
  check(y_range, "y_range");
  if (!(boundary_width > 0.0)) throw ConfigError("boundary_width", "must be positive");
}

namespace {

constexpr double kMarginLeft = 60.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 40.0;
constexpr double kMarker = 4.0;

struct P {
  double x;
  double y;
};

std::string num(double v) { return text::format_fixed(v, 2); }

// Keeps the part of a convex polygon where w.p + b >= 0.
std::vector<P> clip_half_plane(const std::vector<P>& poly, const svm::Hyperplane& h,
                               double sign) {
  const auto f = [&](const P& p) { return sign * (h.w[0] * p.x + h.w[1] * p.y + h.bias); };
  std::vector<P> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const P& a = poly[i];
    const P& b = poly[(i + 1) % poly.size()];
    const double fa = f(a);
    const double fb = f(b);
    if (fa >= 0) out.push_back(a);
    if ((fa >= 0) != (fb >= 0)) {
      const double t = fa / (fa - fb);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

// Ends of the decision line inside the rectangle, if it crosses it.
std::optional<std::pair<P, P>> clip_line(const std::vector<P>& rect,
                                         const svm::Hyperplane& h) {
  std::vector<P> hits;
  const auto f = [&](const P& p) { return h.w[0] * p.x + h.w[1] * p.y + h.bias; };
  for (std::size_t i = 0; i < rect.size(); ++i) {
    const P& a = rect[i];
    const P& b = rect[(i + 1) % rect.size()];
    const double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) hits.push_back(a);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      const double t = fa / (fa - fb);
      hits.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  if (hits.size() < 2) return std::nullopt;
  const auto key = [](const P& p) { return std::pair{p.x, p.y}; };
  const auto [lo, hi] = std::minmax_element(
      hits.begin(), hits.end(), [&](const P& a, const P& b) { return key(a) < key(b); });
  return std::pair{*lo, *hi};
}

AxisRange fit_range(const std::vector<double>& values, AxisRange fallback) {
  if (values.empty()) return fallback;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double span = *hi - *lo;
  if (span <= 0.0) span = std::max(1.0, std::abs(*lo));
  return {*lo - 0.05 * span, *hi + 0.05 * span};
}

}  // namespace

std::string render_svg(const svm::SvmModel& model, const io::Dataset& data,
                       const PlotSpec& spec) {
  spec.validate();
  const bool linear = model.kernel.family == svm::KernelFamily::kLinear;
  if (spec.shade_regions && !linear) {
    throw ConfigError("shade", "region shading needs a linear-kernel model");
  }
  std::optional<svm::Hyperplane> plane;
  if (linear) {
    plane = svm::extract_hyperplane(model);
    if (plane->w.size() != 2) throw DimensionMismatch("plot needs 2-D features");
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& e : data.examples) {
    if (e.features.size() != 2) throw DimensionMismatch("plot needs 2-D features");
    xs.push_back(e.features[0]);
    ys.push_back(e.features[1]);
  }
  const AxisRange xr = spec.x_range ? *spec.x_range : fit_range(xs, {-1.0, 1.0});
  AxisRange y_fallback{-1.0, 1.0};
  if (plane && std::abs(plane->w[1]) > svm::kNumericFloor) {
    // Without data, centre the view on the decision line.
    const double xm = 0.5 * (xr.lo + xr.hi);
    const double ym = -(plane->w[0] * xm + plane->bias) / plane->w[1];
    y_fallback = {ym - 1.0, ym + 1.0};
  }
  const AxisRange yr = spec.y_range ? *spec.y_range : fit_range(ys, y_fallback);

  const double W = spec.width;
  const double H = spec.height;
  const double pw = std::max(1.0, W - kMarginLeft - kMarginRight);
  const double ph = std::max(1.0, H - kMarginTop - kMarginBottom);
  const auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
       "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
       std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
       std::to_string(spec.height) + "\" fill=\"#ffffff\"/>\n";
  if (!spec.title.empty()) {
    std::string t;
    for (char c : spec.title) {
      if (c == '<') t += "&lt;";
      else if (c == '>') t += "&gt;";
      else if (c == '&') t += "&amp;";
      else t += c;
    }
    s += "<text x=\"" + num(W / 2) + "\" y=\"20.00\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">" + t + "</text>\n";
  }

  const std::vector<P> rect{{xr.lo, yr.lo}, {xr.hi, yr.lo}, {xr.hi, yr.hi}, {xr.lo, yr.hi}};
  const auto polygon = [&](const std::vector<P>& poly, const std::string& fill,
                           const char* cls) {
    if (poly.size() < 3) return;
    s += "<polygon class=\"";
    s += cls;
    s += "\" fill=\"" + fill + "\" fill-opacity=\"0.15\" points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (i) s += ' ';
      s += num(px(poly[i].x)) + "," + num(py(poly[i].y));
    }
    s += "\"/>\n";
  };
  if (spec.shade_regions && plane) {
    // Positive side is the mainline class.
    polygon(clip_half_plane(rect, *plane, 1.0), spec.route0.color, "region route0");
    polygon(clip_half_plane(rect, *plane, -1.0), spec.route1.color, "region route1");
  }

  // Frame and ticks.
  s += "<rect class=\"frame\" x=\"" + num(kMarginLeft) + "\" y=\"" + num(kMarginTop) +
       "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"#444444\"/>\n";
  constexpr int kTicks = 5;
  for (int k = 0; k <= kTicks; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / kTicks;
    const double fy = yr.lo + (yr.hi - yr.lo) * k / kTicks;
    s += "<text x=\"" + num(px(fx)) + "\" y=\"" + num(kMarginTop + ph + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
         num(fx) + "</text>\n";
    s += "<text x=\"" + num(kMarginLeft - 6) + "\" y=\"" + num(py(fy) + 3) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + num(fy) +
         "</text>\n";
  }

  if (plane) {
    if (const auto seg = clip_line(rect, *plane)) {
      s += "<line class=\"boundary\" x1=\"" + num(px(seg->first.x)) + "\" y1=\"" +
           num(py(seg->first.y)) + "\" x2=\"" + num(px(seg->second.x)) + "\" y2=\"" +
           num(py(seg->second.y)) + "\" stroke=\"" + spec.boundary_stroke +
           "\" stroke-width=\"" + num(spec.boundary_width) + "\"/>\n";
    }
  }

  for (const auto& e : data.examples) {
    const bool main = e.label == io::to_class_label(sim::Route::kMainline);
    const ClassStyle& style = main ? spec.route0 : spec.route1;
    const char* cls = main ? "pt route0" : "pt route1";
    const double cx = px(e.features[0]);
    const double cy = py(e.features[1]);
    if (style.shape == MarkerShape::kCircle) {
      s += std::string("<circle class=\"") + cls + "\" cx=\"" + num(cx) + "\" cy=\"" +
           num(cy) + "\" r=\"" + num(kMarker) + "\" fill=\"" + style.color + "\"/>\n";
    } else {
      s += std::string("<rect class=\"") + cls + "\" x=\"" + num(cx - kMarker) +
           "\" y=\"" + num(cy - kMarker) + "\" width=\"" + num(2 * kMarker) +
           "\" height=\"" + num(2 * kMarker) + "\" fill=\"" + style.color + "\"/>\n";
    }
    if (svm::classify(model, e.features) != e.label) {
      s += "<circle class=\"miss\" cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" +
           num(2.2 * kMarker) + "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.50\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

void write_svg(const svm::SvmModel& model, const io::Dataset& data,
               const PlotSpec& spec, const std::string& path) {
  const std::string doc = render_svg(model, data, spec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << doc;
  out.flush();
  if (!out) throw IoError("failed to write " + path);
}

}  // namespace routepred::plot
