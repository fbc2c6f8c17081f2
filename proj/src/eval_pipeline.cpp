#include "routepred/eval_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "routepred/errors.hpp"
#include "routepred/text.hpp"

namespace routepred::eval {

EvalCount evaluate(const svm::SvmModel& model, const io::Dataset& test) {
  if (test.examples.empty()) throw DataError("test set is empty");
  EvalCount count{0, test.examples.size()};
  for (const auto& e : test.examples) {
    if (svm::classify(model, e.features) == e.label) ++count.correct;
  }
  return count;
}

Boundary boundary_from_hyperplane(const svm::Hyperplane& h) {
  if (h.w.size() != 2) {
    throw DimensionMismatch("boundary line needs a 2-D hyperplane");
  }
  const double wx = h.w[0];
  const double wy = h.w[1];
  if (std::abs(wy) > svm::kNumericFloor) {
    return LineBoundary{-wx / wy, -h.bias / wy};
  }
  if (std::abs(wx) > svm::kNumericFloor) return VerticalBoundary{-h.bias / wx};
  return ConstantDecision{};
}

Boundary boundary_report(const svm::SvmModel& model) {
  if (model.kernel.family != svm::KernelFamily::kLinear) {
    return UnsupportedBoundary{};
  }
  return boundary_from_hyperplane(svm::extract_hyperplane(model));
}

std::string describe(const Boundary& boundary) {
  struct Visitor {
    std::string operator()(const LineBoundary& b) const {
      return "y = " + text::format_fixed(b.slope, 6) + "x + " +
             text::format_fixed(b.intercept, 6);
    }
    std::string operator()(const VerticalBoundary& b) const {
      return "x = " + text::format_fixed(b.x, 6);
    }
    std::string operator()(const ConstantDecision&) const {
      return "none (constant decision)";
    }
    std::string operator()(const UnsupportedBoundary&) const {
      return "n/a (nonlinear kernel)";
    }
  };
  return std::visit(Visitor{}, boundary);
}

std::optional<double> EvaluationReport::mean_accuracy() const {
  if (rows.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& r : rows) sum += r.accuracy();
  return sum / static_cast<double>(rows.size());
}

namespace {

void check_sizes(const sim::Trace& trace, std::size_t train_size,
                 std::span<const std::size_t> test_sizes) {
  for (std::size_t n : test_sizes) {
    if (n == 0) throw DataError("test sizes must be positive");
  }
  const std::size_t largest =
      test_sizes.empty() ? 0 : *std::max_element(test_sizes.begin(), test_sizes.end());
  // sample_test_set re-checks per size; this reports the whole sweep up front.
  std::vector<std::string_view> ids;
  for (const auto& p : trace.points) ids.push_back(p.vehicle_id);
  std::sort(ids.begin(), ids.end());
  const auto vehicles = static_cast<std::size_t>(
      std::unique(ids.begin(), ids.end()) - ids.begin());
  if (vehicles < train_size + largest) {
    throw DataError("trace has " + std::to_string(vehicles) + " vehicles, sweep needs " +
                    std::to_string(train_size + largest));
  }
}

}  // namespace

EvaluationReport sweep_model(const svm::SvmModel& model, const sim::Trace& trace,
                             std::size_t train_size,
                             std::span<const std::size_t> test_sizes,
                             std::uint64_t seed) {
  check_sizes(trace, train_size, test_sizes);
  EvaluationReport report;
  report.train_size = train_size;
  report.seed = seed;
  report.converged = model.summary.converged;
  report.support_vectors = model.support.size();
  report.boundary = boundary_report(model);
  for (std::size_t n : test_sizes) {
    const io::Dataset test = io::sample_test_set(trace, train_size, n, seed);
    report.rows.push_back({n, evaluate(model, test).correct});
  }
  return report;
}

EvaluationReport accuracy_sweep(const sim::Trace& trace, std::size_t train_size,
                                std::span<const std::size_t> test_sizes,
                                const svm::KernelSpec& kernel,
                                const svm::TrainConfig& cfg, std::uint64_t seed) {
  check_sizes(trace, train_size, test_sizes);
  const io::Dataset train = io::sample_examples(trace, train_size, seed);
  const svm::SvmModel model = svm::train(train.examples, kernel, cfg);
  return sweep_model(model, trace, train_size, test_sizes, seed);
}

void write_report_csv(const EvaluationReport& report, std::ostream& out) {
  out << "test_size,correct,accuracy\n";
  for (const auto& r : report.rows) {
    out << r.test_size << ',' << r.correct << ',' << text::format_g17(r.accuracy())
        << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed to write report");
}

void write_report_csv(const EvaluationReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_report_csv(report, out);
}

std::string format_table(const EvaluationReport& report) {
  const std::string left_head = "Testing examples";
  const std::string right_head = std::to_string(report.train_size) + " training examples";
  const std::size_t lw = left_head.size();
  const std::size_t rw = right_head.size();
  const auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  const std::string rule = "+" + std::string(lw + 2, '-') + "+" + std::string(rw + 2, '-') + "+\n";

  std::string out = "Route prediction accuracy\n" + rule;
  out += "| " + left_head + " | " + right_head + " |\n" + rule;
  for (const auto& r : report.rows) {
    out += "| " + pad(std::to_string(r.test_size), lw) + " | " +
           pad(text::format_fixed(100.0 * r.accuracy(), 2) + "%", rw) + " |\n";
  }
  out += rule;
  const auto mean = report.mean_accuracy();
  out += "mean accuracy: " +
         (mean ? text::format_fixed(100.0 * *mean, 2) + "%" : std::string("undefined (no rows)")) +
         "\n";
  out += "decision boundary: " + describe(report.boundary) + "\n";
  return out;
}

}  // namespace routepred::eval
