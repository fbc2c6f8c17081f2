#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "routepred/dataset_io.hpp"
#include "routepred/svm.hpp"
#include "routepred/traffic_sim.hpp"

namespace routepred::eval {

struct EvalCount {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const {
    return static_cast<double>(correct) / static_cast<double>(total);
  }
};

/// Counts test examples whose predicted class equals their label.
/// DataError on an empty test set.
EvalCount evaluate(const svm::SvmModel& model, const io::Dataset& test);

/// Decision line y = slope * x + intercept in raw coordinates.
struct LineBoundary {
  double slope = 0.0;
  double intercept = 0.0;
};
/// w_y vanishes: the boundary is the vertical line at x.
struct VerticalBoundary {
  double x = 0.0;
};
/// w vanishes entirely; every input gets the class of sign(bias).
struct ConstantDecision {};
/// Nonlinear kernel; there is no single line to report.
struct UnsupportedBoundary {};

using Boundary = std::variant<LineBoundary, VerticalBoundary, ConstantDecision,
                              UnsupportedBoundary>;

Boundary boundary_from_hyperplane(const svm::Hyperplane& h);
Boundary boundary_report(const svm::SvmModel& model);
std::string describe(const Boundary& boundary);

struct SweepRow {
  std::size_t test_size = 0;
  std::size_t correct = 0;
  double accuracy() const {
    return static_cast<double>(correct) / static_cast<double>(test_size);
  }
};

struct EvaluationReport {
  std::vector<SweepRow> rows;  // in requested test_sizes order
  Boundary boundary = UnsupportedBoundary{};
  std::size_t train_size = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::size_t support_vectors = 0;

  /// Unweighted mean of the row accuracies; empty when there are no rows.
  std::optional<double> mean_accuracy() const;
};

/// Trains once on sample_examples(trace, train_size, seed) and evaluates each
/// requested size on its own sample_test_set draw.
EvaluationReport accuracy_sweep(const sim::Trace& trace, std::size_t train_size,
                                std::span<const std::size_t> test_sizes,
                                const svm::KernelSpec& kernel,
                                const svm::TrainConfig& cfg, std::uint64_t seed);

/// Same sweep for an already-trained model. train_size and seed identify the
/// training vehicles to exclude from the test sets.
EvaluationReport sweep_model(const svm::SvmModel& model, const sim::Trace& trace,
                             std::size_t train_size,
                             std::span<const std::size_t> test_sizes,
                             std::uint64_t seed);

/// `test_size,correct,accuracy` rows, accuracy with 17 significant digits.
void write_report_csv(const EvaluationReport& report, std::ostream& out);
void write_report_csv(const EvaluationReport& report, const std::string& path);

/// Two-column accuracy table followed by the mean and the boundary line.
std::string format_table(const EvaluationReport& report);

}  // namespace routepred::eval
