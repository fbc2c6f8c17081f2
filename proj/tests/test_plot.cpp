#include <doctest.h>

#include "routepred/errors.hpp"
#include "routepred/svg_plot.hpp"

using namespace routepred;
using svm::ClassLabel;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

// Linear model whose boundary is y = -1.5, mainline (+1) above it.
svm::SvmModel horizontal_model() {
  svm::SvmModel m;
  m.support = {{{0.0, 1.0}, ClassLabel::kPositive}};
  m.alphas = {1.0};
  m.bias = 1.5;
  return m;  // decision = y + 1.5
}

io::Dataset points(std::size_t n, std::size_t wrong) {
  io::Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    const bool above = i % 2 == 0;
    const double y = above ? -0.5 : -2.0;
    auto label = above ? ClassLabel::kPositive : ClassLabel::kNegative;
    if (i < wrong) label = above ? ClassLabel::kNegative : ClassLabel::kPositive;
    d.examples.push_back({{10.0 * static_cast<double>(i), y}, label});
    d.vehicle_ids.push_back("v" + std::to_string(i));
  }
  return d;
}

}  // namespace

TEST_CASE("one ring per misclassified example") {
  const auto m = horizontal_model();
  const auto one = plot::render_svg(m, points(10, 1), plot::PlotSpec{});
  CHECK(count(one, "class=\"miss\"") == 1);
  const auto six = plot::render_svg(m, points(100, 6), plot::PlotSpec{});
  CHECK(count(six, "class=\"miss\"") == 6);
  CHECK(count(six, "class=\"pt route0\"") + count(six, "class=\"pt route1\"") == 100);
}

TEST_CASE("markers are styled by true label") {
  const auto d = points(10, 3);
  std::size_t main = 0;
  for (const auto& e : d.examples) main += e.label == ClassLabel::kPositive;
  const auto svg = plot::render_svg(horizontal_model(), d, plot::PlotSpec{});
  CHECK(count(svg, "class=\"pt route0\"") == main);
  CHECK(count(svg, "class=\"pt route1\"") == d.examples.size() - main);
}

TEST_CASE("empty dataset still shows regions and boundary") {
  const auto svg = plot::render_svg(horizontal_model(), io::Dataset{}, plot::PlotSpec{});
  CHECK(count(svg, "class=\"region route0\"") == 1);
  CHECK(count(svg, "class=\"region route1\"") == 1);
  CHECK(count(svg, "class=\"boundary\"") == 1);
  CHECK(count(svg, "class=\"pt ") == 0);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("</svg>\n") == svg.size() - 7);
}

TEST_CASE("boundary outside the view gives a single region") {
  plot::PlotSpec spec;
  spec.y_range = plot::AxisRange{0.0, 1.0};
  const auto svg = plot::render_svg(horizontal_model(), io::Dataset{}, spec);
  CHECK(count(svg, "class=\"region route0\"") == 1);
  CHECK(count(svg, "class=\"region route1\"") == 0);
  CHECK(count(svg, "class=\"boundary\"") == 0);
}

TEST_CASE("boundary line sits where the model puts it") {
  plot::PlotSpec spec;
  spec.width = 260;
  spec.height = 170;  // plot area 180 x 100 after margins
  spec.x_range = plot::AxisRange{0.0, 10.0};
  spec.y_range = plot::AxisRange{-2.5, -0.5};
  const auto svg = plot::render_svg(horizontal_model(), io::Dataset{}, spec);
  // y = -1.5 is halfway down: 30 + 50 = 80 px.
  CHECK(svg.find("y1=\"80.00\"") != std::string::npos);
  CHECK(svg.find("y2=\"80.00\"") != std::string::npos);
}

TEST_CASE("shading needs a linear kernel") {
  svm::SvmModel rbf;
  rbf.kernel = svm::KernelSpec::rbf(1.0);
  rbf.support = {{{0.0, 0.0}, ClassLabel::kPositive}, {{1.0, 1.0}, ClassLabel::kNegative}};
  rbf.alphas = {1.0, 1.0};
  CHECK_THROWS_AS(plot::render_svg(rbf, points(4, 0), plot::PlotSpec{}), ConfigError);
  plot::PlotSpec scatter;
  scatter.shade_regions = false;
  const auto svg = plot::render_svg(rbf, points(4, 0), scatter);
  CHECK(count(svg, "class=\"region") == 0);
  CHECK(count(svg, "class=\"boundary\"") == 0);
  CHECK(count(svg, "class=\"pt ") == 4);
}

TEST_CASE("plot spec validation") {
  plot::PlotSpec s;
  s.width = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.height = -5;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.x_range = plot::AxisRange{1.0, 1.0};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.y_range = plot::AxisRange{2.0, 1.0};
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("output is byte-stable and escapes the title") {
  plot::PlotSpec spec;
  spec.title = "a < b & c";
  const auto d = points(30, 4);
  const auto a = plot::render_svg(horizontal_model(), d, spec);
  const auto b = plot::render_svg(horizontal_model(), d, spec);
  CHECK(a == b);
  CHECK(a.find("a &lt; b &amp; c") != std::string::npos);
}
