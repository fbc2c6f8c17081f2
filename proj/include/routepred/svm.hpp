#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace routepred::svm {

using Vector = std::vector<double>;

/// Guard for norms and denominators.
inline constexpr double kNumericFloor = 1e-12;

enum class ClassLabel : int { kNegative = -1, kPositive = 1 };

inline double sign_of(ClassLabel label) {
  return static_cast<double>(static_cast<int>(label));
}

struct LabeledExample {
  Vector features;
  ClassLabel label = ClassLabel::kPositive;
  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

enum class KernelFamily { kLinear, kPolynomial, kRbf, kSigmoid };

std::string_view to_string(KernelFamily family);
/// Accepts "linear", "polynomial" (or "poly"), "rbf", "sigmoid".
std::optional<KernelFamily> parse_kernel_family(std::string_view name);

/// Kernel family plus the parameters that family uses:
///
///   linear      a.b
///   polynomial  (gamma * a.b + coef0)^degree
///   rbf         exp(-gamma * |a - b|^2)
///   sigmoid     tanh(gamma * a.b + coef0)
///
/// Unset parameters of a family that uses them are filled by
/// `with_defaults` (degree 3, coef0 0, gamma = 1 / (d * variance of the
/// training features)).
struct KernelSpec {
  KernelFamily family = KernelFamily::kLinear;
  std::optional<int> degree;
  std::optional<double> gamma;
  std::optional<double> coef0;

  static KernelSpec linear() { return {}; }
  static KernelSpec polynomial(std::optional<int> degree = {},
                               std::optional<double> gamma = {},
                               std::optional<double> coef0 = {});
  static KernelSpec rbf(std::optional<double> gamma = {});
  static KernelSpec sigmoid(std::optional<double> gamma = {},
                            std::optional<double> coef0 = {});

  bool uses_degree() const { return family == KernelFamily::kPolynomial; }
  bool uses_gamma() const { return family != KernelFamily::kLinear; }
  bool uses_coef0() const {
    return family == KernelFamily::kPolynomial ||
           family == KernelFamily::kSigmoid;
  }

  /// Rejects parameters set for a family that does not use them and
  /// out-of-range values (degree >= 1, gamma > 0, all finite).
  void validate() const;
  /// True when every parameter the family uses is set.
  bool complete() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

KernelSpec with_defaults(KernelSpec spec,
                         std::span<const LabeledExample> training);

/// Throws DimensionMismatch when sizes differ and ConfigError when the
/// spec is incomplete.
double kernel_eval(const KernelSpec& spec, std::span<const double> a,
                   std::span<const double> b);

struct Hyperplane {
  Vector w;
  double bias = 0.0;
};

/// Per-feature standardization fitted on training data.
struct Standardizer {
  Vector mean;
  Vector scale;  // standard deviation, 1 where it would be zero

  static Standardizer fit(std::span<const LabeledExample> data);
  LabeledExample apply(const LabeledExample& e) const;
  std::vector<LabeledExample> apply(std::span<const LabeledExample> data) const;
  /// Maps a hyperplane learned on standardized features back to raw ones.
  Hyperplane to_raw(const Hyperplane& h) const;

  friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

struct TrainConfig {
  double C = 0.1;
  double tol = 1e-3;
  std::size_t max_passes = 200;
  // Permutes the order in which candidates are scanned, which only decides
  // ties in working-set selection.
  std::uint64_t rng_seed = 0;
  // Fit a Standardizer on the training data and learn in standardized
  // coordinates. The model keeps the transform and applies it to every
  // input, so callers always pass raw features.
  bool standardize = true;

  void validate() const;
};

struct TrainingSummary {
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t passes = 0;
  /// Largest KKT violation (max over I_up minus min over I_low) at exit.
  double max_violation = 0.0;
  /// Dual objective at the start, after each completed pass of n
  /// iterations, and at exit.
  std::vector<double> objective_history;
  /// Index into the training data of each stored support example.
  std::vector<std::size_t> support_indices;
};

/// Trained classifier. The weight vector is implicit:
/// w = sum_i alphas[i] * label_i * phi(support_i).
///
/// With `scaling` set, support examples live in standardized coordinates
/// and inputs are standardized before the kernel is applied; margins and
/// |w| are then measured in standardized coordinates.
struct SvmModel {
  std::vector<LabeledExample> support;
  Vector alphas;
  double bias = 0.0;
  KernelSpec kernel;
  std::optional<Standardizer> scaling;
  TrainingSummary summary;

  std::size_t dimension() const {
    return support.empty() ? 0 : support.front().features.size();
  }
};

/// sum_i alphas[i] * y_i * K(support_i, x) + bias, summed in index order.
double decision_value(const SvmModel& model, std::span<const double> x);

/// The classification function: +1 when z >= 0, else -1.
ClassLabel classify_value(double z);

ClassLabel classify(const SvmModel& model, std::span<const double> x);

/// y * z(x). Positive iff the example is classified correctly.
double functional_margin(const SvmModel& model, const LabeledExample& e);

/// |w| in the kernel feature space. Throws ZeroNorm below kNumericFloor.
double weight_norm(const SvmModel& model);

/// Functional margin divided by |w|: the signed distance to the boundary
/// (in feature space for nonlinear kernels).
double geometric_margin(const SvmModel& model, const LabeledExample& e);

/// sum alpha - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(const SvmModel& model);

/// Soft-margin dual by pairwise coordinate ascent (SMO).
///
/// Each iteration takes the example with the largest KKT violation, pairs it
/// with the partner whose two-variable step gains the most dual objective,
/// solves that subproblem in closed form and clips it to the box [0, C].
/// Stops once the largest violation is at most cfg.tol, or after
/// cfg.max_passes passes of n iterations each; the summary records which.
///
/// Throws DataError for empty or single-class data, DimensionMismatch for
/// ragged features.
SvmModel train(std::span<const LabeledExample> data, const KernelSpec& kernel,
               const TrainConfig& cfg);

/// w = sum alpha_i y_i x_i, expressed in raw input coordinates (mapped back
/// through `scaling` when the model standardizes). Linear models only
/// (UnsupportedKernel otherwise); throws DataError for a model without
/// support examples.
Hyperplane extract_hyperplane(const SvmModel& model);

/// Versioned text format. One header line
///
///   routepred-svm v1 family=<f> degree=<d|-> gamma=<g|-> coef0=<c|->
///       bias=<b> dim=<d> count=<n> converged=<0|1> mean=<m1,..|->
///       scale=<s1,..|->
///
/// (a single line), then one line per support vector: `alpha label f1 ...`.
/// Reals use 17 significant digits so a model round-trips bit-exactly. The
/// training summary beyond the convergence flag is not stored.
void write_model(std::ostream& out, const SvmModel& model);
SvmModel read_model(std::istream& in);

void save_model(const std::string& path, const SvmModel& model);
SvmModel load_model(const std::string& path);

}  // namespace routepred::svm
