#include "routepred/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "routepred/errors.hpp"
#include "routepred/random.hpp"
#include "routepred/text.hpp"

namespace routepred::svm {

namespace {

// Curvature substitute for non-positive-definite pairs (sigmoid kernel,
// duplicate points).
constexpr double kTau = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void check_dimensions(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw DimensionMismatch("dimension mismatch: expected " +
                            std::to_string(expected) + ", got " +
                            std::to_string(got));
  }
}

}  // namespace

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::kLinear:
      return "linear";
    case KernelFamily::kPolynomial:
      return "polynomial";
    case KernelFamily::kRbf:
      return "rbf";
    case KernelFamily::kSigmoid:
      return "sigmoid";
  }
  return "unknown";
}

std::optional<KernelFamily> parse_kernel_family(std::string_view name) {
  if (name == "linear") return KernelFamily::kLinear;
  if (name == "polynomial" || name == "poly") return KernelFamily::kPolynomial;
  if (name == "rbf") return KernelFamily::kRbf;
  if (name == "sigmoid") return KernelFamily::kSigmoid;
  return std::nullopt;
}

KernelSpec KernelSpec::polynomial(std::optional<int> degree,
                                  std::optional<double> gamma,
                                  std::optional<double> coef0) {
  return {KernelFamily::kPolynomial, degree, gamma, coef0};
}

KernelSpec KernelSpec::rbf(std::optional<double> gamma) {
  return {KernelFamily::kRbf, std::nullopt, gamma, std::nullopt};
}

KernelSpec KernelSpec::sigmoid(std::optional<double> gamma,
                               std::optional<double> coef0) {
  return {KernelFamily::kSigmoid, std::nullopt, gamma, coef0};
}

void KernelSpec::validate() const {
  const std::string family_name(to_string(family));
  if (degree && !uses_degree()) {
    throw ConfigError("degree", "not used by the " + family_name + " kernel");
  }
  if (gamma && !uses_gamma()) {
    throw ConfigError("gamma", "not used by the " + family_name + " kernel");
  }
  if (coef0 && !uses_coef0()) {
    throw ConfigError("coef0", "not used by the " + family_name + " kernel");
  }
  if (degree && *degree < 1) throw ConfigError("degree", "must be at least 1");
  if (gamma && !(std::isfinite(*gamma) && *gamma > 0.0)) {
    throw ConfigError("gamma", "must be finite and positive");
  }
  if (coef0 && !std::isfinite(*coef0)) {
    throw ConfigError("coef0", "must be finite");
  }
}

bool KernelSpec::complete() const {
  return (!uses_degree() || degree) && (!uses_gamma() || gamma) &&
         (!uses_coef0() || coef0);
}

KernelSpec with_defaults(KernelSpec spec,
                         std::span<const LabeledExample> training) {
  if (spec.uses_degree() && !spec.degree) spec.degree = 3;
  if (spec.uses_coef0() && !spec.coef0) spec.coef0 = 0.0;
  if (spec.uses_gamma() && !spec.gamma) {
    // Variance over every feature entry of the training set.
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;
    std::size_t dim = 0;
    for (const auto& e : training) {
      dim = e.features.size();
      for (double v : e.features) {
        sum += v;
        sum_sq += v * v;
        ++count;
      }
    }
    double var = 0.0;
    if (count > 0) {
      const double mean = sum / static_cast<double>(count);
      var = sum_sq / static_cast<double>(count) - mean * mean;
    }
    spec.gamma = (dim > 0 && var > kNumericFloor)
                     ? 1.0 / (static_cast<double>(dim) * var)
                     : 1.0;
  }
  return spec;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> a,
                   std::span<const double> b) {
  check_dimensions(a.size(), b.size());
  if (!spec.complete()) {
    throw ConfigError("kernel", "parameters not resolved for " +
                                    std::string(to_string(spec.family)));
  }
  switch (spec.family) {
    case KernelFamily::kLinear:
      return dot(a, b);
    case KernelFamily::kPolynomial:
      return std::pow(*spec.gamma * dot(a, b) + *spec.coef0, *spec.degree);
    case KernelFamily::kRbf: {
      double sq = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        sq += d * d;
      }
      return std::exp(-*spec.gamma * sq);
    }
    case KernelFamily::kSigmoid:
      return std::tanh(*spec.gamma * dot(a, b) + *spec.coef0);
  }
  return 0.0;
}

void TrainConfig::validate() const {
  if (!(std::isfinite(C) && C > 0.0)) {
    throw ConfigError("C", "must be finite and positive");
  }
  if (!(std::isfinite(tol) && tol > 0.0)) {
    throw ConfigError("tol", "must be finite and positive");
  }
  if (max_passes < 1) throw ConfigError("max_passes", "must be at least 1");
}

double decision_value(const SvmModel& model, std::span<const double> x) {
  if (!model.support.empty()) check_dimensions(model.dimension(), x.size());
  Vector scaled;
  if (model.scaling) {
    check_dimensions(model.scaling->mean.size(), x.size());
    scaled.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      scaled[k] = (x[k] - model.scaling->mean[k]) / model.scaling->scale[k];
    }
    x = scaled;
  }
  double z = 0.0;
  for (std::size_t i = 0; i < model.support.size(); ++i) {
    const auto& s = model.support[i];
    z += model.alphas[i] * sign_of(s.label) *
         kernel_eval(model.kernel, s.features, x);
  }
  return z + model.bias;
}

ClassLabel classify_value(double z) {
  return z >= 0.0 ? ClassLabel::kPositive : ClassLabel::kNegative;
}

ClassLabel classify(const SvmModel& model, std::span<const double> x) {
  return classify_value(decision_value(model, x));
}

double functional_margin(const SvmModel& model, const LabeledExample& e) {
  return sign_of(e.label) * decision_value(model, e.features);
}

double weight_norm(const SvmModel& model) {
  double sq = 0.0;
  const std::size_t n = model.support.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& si = model.support[i];
    for (std::size_t j = 0; j < n; ++j) {
      const auto& sj = model.support[j];
      sq += model.alphas[i] * model.alphas[j] * sign_of(si.label) *
            sign_of(sj.label) *
            kernel_eval(model.kernel, si.features, sj.features);
    }
  }
  if (!(sq > kNumericFloor * kNumericFloor)) {
    throw ZeroNorm("weight vector norm is below the numeric floor");
  }
  return std::sqrt(sq);
}

double geometric_margin(const SvmModel& model, const LabeledExample& e) {
  return functional_margin(model, e) / weight_norm(model);
}

double dual_objective(const SvmModel& model) {
  const std::size_t n = model.support.size();
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += model.alphas[i];
    for (std::size_t j = 0; j < n; ++j) {
      quad += model.alphas[i] * model.alphas[j] *
              sign_of(model.support[i].label) *
              sign_of(model.support[j].label) *
              kernel_eval(model.kernel, model.support[i].features,
                          model.support[j].features);
    }
  }
  return linear - 0.5 * quad;
}

namespace {

// Full kernel matrices are cached up to this many examples (32 MiB);
// beyond it rows are recomputed on demand.
constexpr std::size_t kMaxCachedExamples = 2048;

// Dual state for SMO. gradient[t] is the gradient of the minimization form
// 1/2 a'Qa - sum a with Q_st = y_s y_t K_st, so -y_t * gradient[t] is the
// bias that would put example t exactly on its margin.
class SmoSolver {
 public:
  SmoSolver(std::span<const LabeledExample> data, const KernelSpec& kernel,
            const TrainConfig& cfg)
      : data_(data),
        kernel_(kernel),
        cfg_(cfg),
        n_(data.size()),
        y_(n_),
        alpha_(n_, 0.0),
        gradient_(n_, -1.0),
        diag_(n_),
        row_i_(n_),
        row_j_(n_),
        order_(n_) {
    if (n_ <= kMaxCachedExamples) {
      matrix_.resize(n_ * n_);
      for (std::size_t s = 0; s < n_; ++s) {
        for (std::size_t t = s; t < n_; ++t) {
          const double v =
              kernel_eval(kernel_, data_[s].features, data_[t].features);
          matrix_[s * n_ + t] = v;
          matrix_[t * n_ + s] = v;
        }
      }
    }
    for (std::size_t t = 0; t < n_; ++t) {
      y_[t] = sign_of(data_[t].label);
      diag_[t] = k(t, t);
    }
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    Rng rng(cfg_.rng_seed);
    for (std::size_t t = n_; t > 1; --t) {
      std::swap(order_[t - 1], order_[rng.below(t)]);
    }
  }

  TrainingSummary run() {
    TrainingSummary summary;
    summary.objective_history.push_back(objective());
    const std::size_t max_iterations =
        cfg_.max_passes > std::numeric_limits<std::size_t>::max() / n_
            ? std::numeric_limits<std::size_t>::max()
            : cfg_.max_passes * n_;

    while (true) {
      const Violation v = max_violation();
      summary.max_violation = v.up - v.low;
      if (summary.max_violation <= cfg_.tol) {
        summary.converged = true;
        break;
      }
      if (summary.iterations >= max_iterations) break;
      step(v);
      ++summary.iterations;
      if (summary.iterations % n_ == 0) {
        summary.objective_history.push_back(objective());
      }
    }
    summary.passes = (summary.iterations + n_ - 1) / n_;
    if (summary.iterations % n_ != 0) {
      summary.objective_history.push_back(objective());
    }
    return summary;
  }

  double bias() const {
    double sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n_; ++t) {
      if (alpha_[t] > 0.0 && alpha_[t] < cfg_.C) {
        sum += -y_[t] * gradient_[t];
        ++free_count;
      }
    }
    if (free_count > 0) return sum / static_cast<double>(free_count);
    const Violation v = max_violation();
    return 0.5 * (v.up + v.low);
  }

  const Vector& alpha() const { return alpha_; }

 private:
  struct Violation {
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    std::size_t up_index = 0;
  };

  double k(std::size_t s, std::size_t t) const {
    if (!matrix_.empty()) return matrix_[s * n_ + t];
    return kernel_eval(kernel_, data_[s].features, data_[t].features);
  }

  void fill_row(std::size_t s, Vector& row) const {
    if (!matrix_.empty()) {
      std::copy_n(matrix_.begin() + static_cast<std::ptrdiff_t>(s * n_), n_,
                  row.begin());
      return;
    }
    for (std::size_t t = 0; t < n_; ++t) row[t] = k(s, t);
  }

  bool in_up(std::size_t t) const {
    return y_[t] > 0 ? alpha_[t] < cfg_.C : alpha_[t] > 0.0;
  }
  bool in_low(std::size_t t) const {
    return y_[t] > 0 ? alpha_[t] > 0.0 : alpha_[t] < cfg_.C;
  }

  Violation max_violation() const {
    Violation v;
    for (std::size_t t : order_) {
      const double score = -y_[t] * gradient_[t];
      if (in_up(t) && score > v.up) {
        v.up = score;
        v.up_index = t;
      }
      if (in_low(t) && score < v.low) v.low = score;
    }
    return v;
  }

  double objective() const {
    double f = 0.0;
    for (std::size_t t = 0; t < n_; ++t) f += alpha_[t] * (gradient_[t] - 1.0);
    return -0.5 * f;
  }

  double clamp_to_box(double a) const {
    const double snap = kNumericFloor * cfg_.C;
    if (a <= snap) return 0.0;
    if (a >= cfg_.C - snap) return cfg_.C;
    return a;
  }

  void step(const Violation& v) {
    const std::size_t i = v.up_index;
    fill_row(i, row_i_);

    // Partner: largest second-order gain among I_low candidates that
    // form a violating pair with i.
    std::size_t j = i;
    double best_gain = -1.0;
    for (std::size_t t : order_) {
      if (!in_low(t)) continue;
      const double score = -y_[t] * gradient_[t];
      const double diff = v.up - score;
      if (diff <= 0.0) continue;
      double curvature = diag_[i] + diag_[t] - 2.0 * row_i_[t];
      if (curvature <= 0.0) curvature = kTau;
      const double gain = diff * diff / curvature;
      if (gain > best_gain) {
        best_gain = gain;
        j = t;
      }
    }
    fill_row(j, row_j_);

    // Closed-form solve along alpha_i * y_i + alpha_j * y_j = const.
    const double C = cfg_.C;
    const double ai = alpha_[i];
    const double aj = alpha_[j];
    const double err_i = y_[i] * gradient_[i];
    const double err_j = y_[j] * gradient_[j];
    double eta = diag_[i] + diag_[j] - 2.0 * row_i_[j];
    if (eta <= 0.0) eta = kTau;

    double lo;
    double hi;
    if (y_[i] != y_[j]) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(C, C + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - C);
      hi = std::min(C, ai + aj);
    }
    double aj_new = aj + y_[j] * (err_i - err_j) / eta;
    aj_new = clamp_to_box(std::clamp(aj_new, lo, hi));
    const double ai_new = clamp_to_box(ai + y_[i] * y_[j] * (aj - aj_new));

    const double di = ai_new - ai;
    const double dj = aj_new - aj;
    alpha_[i] = ai_new;
    alpha_[j] = aj_new;
    for (std::size_t t = 0; t < n_; ++t) {
      gradient_[t] += y_[t] * (y_[i] * row_i_[t] * di + y_[j] * row_j_[t] * dj);
    }
  }

  std::span<const LabeledExample> data_;
  KernelSpec kernel_;
  TrainConfig cfg_;
  std::size_t n_;
  Vector y_;
  Vector alpha_;
  Vector gradient_;
  Vector diag_;
  Vector row_i_;
  Vector row_j_;
  Vector matrix_;
  std::vector<std::size_t> order_;
};

}  // namespace

SvmModel train(std::span<const LabeledExample> data, const KernelSpec& kernel,
               const TrainConfig& cfg) {
  cfg.validate();
  kernel.validate();
  if (data.empty()) throw DataError("training data is empty");
  const std::size_t dim = data.front().features.size();
  if (dim == 0) throw DataError("training features are empty");
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& e : data) {
    check_dimensions(dim, e.features.size());
    for (double v : e.features) {
      if (!std::isfinite(v)) throw DataError("non-finite training feature");
    }
    (e.label == ClassLabel::kPositive ? has_pos : has_neg) = true;
  }
  if (!(has_pos && has_neg)) {
    throw DataError("training data contains a single class");
  }

  SvmModel model;
  std::vector<LabeledExample> standardized;
  if (cfg.standardize) {
    model.scaling = Standardizer::fit(data);
    standardized = model.scaling->apply(data);
    data = standardized;
  }
  model.kernel = with_defaults(kernel, data);
  SmoSolver solver(data, model.kernel, cfg);
  model.summary = solver.run();
  model.bias = solver.bias();
  const Vector& alpha = solver.alpha();
  for (std::size_t t = 0; t < data.size(); ++t) {
    if (alpha[t] > 0.0) {
      model.support.push_back(data[t]);
      model.alphas.push_back(alpha[t]);
      model.summary.support_indices.push_back(t);
    }
  }
  return model;
}

Hyperplane extract_hyperplane(const SvmModel& model) {
  if (model.kernel.family != KernelFamily::kLinear) {
    throw UnsupportedKernel("hyperplane extraction needs a linear kernel, got " +
                            std::string(to_string(model.kernel.family)));
  }
  if (model.support.empty()) {
    throw DataError("model has no support examples");
  }
  Hyperplane h{Vector(model.dimension(), 0.0), model.bias};
  for (std::size_t i = 0; i < model.support.size(); ++i) {
    const double coef = model.alphas[i] * sign_of(model.support[i].label);
    const auto& x = model.support[i].features;
    for (std::size_t k = 0; k < x.size(); ++k) h.w[k] += coef * x[k];
  }
  return model.scaling ? model.scaling->to_raw(h) : h;
}

Standardizer Standardizer::fit(std::span<const LabeledExample> data) {
  if (data.empty()) throw DataError("cannot standardize an empty dataset");
  const std::size_t dim = data.front().features.size();
  Standardizer s{Vector(dim, 0.0), Vector(dim, 0.0)};
  const auto n = static_cast<double>(data.size());
  for (const auto& e : data) {
    check_dimensions(dim, e.features.size());
    for (std::size_t k = 0; k < dim; ++k) s.mean[k] += e.features[k];
  }
  for (double& m : s.mean) m /= n;
  for (const auto& e : data) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = e.features[k] - s.mean[k];
      s.scale[k] += d * d;
    }
  }
  for (double& v : s.scale) {
    v = std::sqrt(v / n);
    if (v <= kNumericFloor) v = 1.0;
  }
  return s;
}

LabeledExample Standardizer::apply(const LabeledExample& e) const {
  check_dimensions(mean.size(), e.features.size());
  LabeledExample out = e;
  for (std::size_t k = 0; k < mean.size(); ++k) {
    out.features[k] = (e.features[k] - mean[k]) / scale[k];
  }
  return out;
}

std::vector<LabeledExample> Standardizer::apply(
    std::span<const LabeledExample> data) const {
  std::vector<LabeledExample> out;
  out.reserve(data.size());
  for (const auto& e : data) out.push_back(apply(e));
  return out;
}

Hyperplane Standardizer::to_raw(const Hyperplane& h) const {
  check_dimensions(mean.size(), h.w.size());
  Hyperplane raw{Vector(h.w.size()), h.bias};
  for (std::size_t k = 0; k < h.w.size(); ++k) {
    raw.w[k] = h.w[k] / scale[k];
    raw.bias -= raw.w[k] * mean[k];
  }
  return raw;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr std::string_view kMagic = "routepred-svm";
constexpr std::string_view kVersion = "v1";

std::string optional_field(const std::optional<double>& v) {
  return v ? text::format_g17(*v) : "-";
}

std::string join_g17(const Vector& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k > 0) out += ',';
    out += text::format_g17(v[k]);
  }
  return out;
}

bool parse_list(std::string_view s, Vector& out) {
  out.clear();
  for (auto part : text::split(s, ',')) {
    double d = 0.0;
    if (!text::parse_double(part, d)) return false;
    out.push_back(d);
  }
  return true;
}

}  // namespace

void write_model(std::ostream& out, const SvmModel& model) {
  out << kMagic << ' ' << kVersion << " family=" << to_string(model.kernel.family)
      << " degree="
      << (model.kernel.degree ? std::to_string(*model.kernel.degree) : "-")
      << " gamma=" << optional_field(model.kernel.gamma)
      << " coef0=" << optional_field(model.kernel.coef0)
      << " bias=" << text::format_g17(model.bias) << " dim=" << model.dimension()
      << " count=" << model.support.size()
      << " converged=" << (model.summary.converged ? 1 : 0)
      << " mean=" << (model.scaling ? join_g17(model.scaling->mean) : "-")
      << " scale=" << (model.scaling ? join_g17(model.scaling->scale) : "-")
      << '\n';
  for (std::size_t i = 0; i < model.support.size(); ++i) {
    const auto& s = model.support[i];
    out << text::format_g17(model.alphas[i]) << ' '
        << static_cast<int>(s.label);
    for (double v : s.features) out << ' ' << text::format_g17(v);
    out << '\n';
  }
  if (!out) throw IoError("failed to write model");
}

SvmModel read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing model header", 1);
  const auto tokens = text::split(line, ' ');
  if (tokens.size() < 2 || tokens[0] != kMagic) {
    throw ParseError("not a routepred-svm model file", 1);
  }
  if (tokens[1] != kVersion) {
    throw ParseError("unsupported model version " + std::string(tokens[1]), 1);
  }

  SvmModel model;
  std::optional<std::string_view> family;
  std::optional<std::size_t> dim;
  std::optional<std::size_t> count;
  bool have_bias = false;
  Vector mean;
  Vector scale;
  for (std::size_t t = 2; t < tokens.size(); ++t) {
    const auto eq = tokens[t].find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("malformed header token '" + std::string(tokens[t]) + "'", 1);
    }
    const auto key = tokens[t].substr(0, eq);
    const auto value = tokens[t].substr(eq + 1);
    const auto bad = [&] {
      return ParseError("bad value for header key " + std::string(key), 1);
    };
    double d = 0.0;
    std::size_t z = 0;
    if (key == "family") {
      family = value;
    } else if (key == "degree") {
      if (value != "-") {
        if (!text::parse_size(value, z) || z > 1000) throw bad();
        model.kernel.degree = static_cast<int>(z);
      }
    } else if (key == "gamma" || key == "coef0") {
      if (value != "-") {
        if (!text::parse_double(value, d)) throw bad();
        (key == "gamma" ? model.kernel.gamma : model.kernel.coef0) = d;
      }
    } else if (key == "bias") {
      if (!text::parse_double(value, d)) throw bad();
      model.bias = d;
      have_bias = true;
    } else if (key == "dim") {
      if (!text::parse_size(value, z)) throw bad();
      dim = z;
    } else if (key == "count") {
      if (!text::parse_size(value, z)) throw bad();
      count = z;
    } else if (key == "mean" || key == "scale") {
      if (value != "-" && !parse_list(value, key == "mean" ? mean : scale)) {
        throw bad();
      }
    } else if (key == "converged") {
      if (value != "0" && value != "1") throw bad();
      model.summary.converged = value == "1";
    } else {
      throw ParseError("unknown header key " + std::string(key), 1);
    }
  }
  if (!family || !dim || !count || !have_bias) {
    throw ParseError("model header lacks family, bias, dim or count", 1);
  }
  if (mean.size() != scale.size() || (!mean.empty() && mean.size() != *dim)) {
    throw ParseError("mean and scale must both have dim entries", 1);
  }
  if (!mean.empty()) {
    for (double v : scale) {
      if (!(v > 0.0)) throw ParseError("scale entries must be positive", 1);
    }
    model.scaling = Standardizer{std::move(mean), std::move(scale)};
  }
  const auto parsed_family = parse_kernel_family(*family);
  if (!parsed_family) {
    throw ParseError("unknown kernel family " + std::string(*family), 1);
  }
  model.kernel.family = *parsed_family;
  try {
    model.kernel.validate();
  } catch (const ConfigError& e) {
    throw ParseError(std::string("invalid kernel parameters: ") + e.what(), 1);
  }
  if (!model.kernel.complete()) {
    throw ParseError("kernel parameters incomplete", 1);
  }

  for (std::size_t i = 0; i < *count; ++i) {
    const std::size_t line_no = i + 2;
    if (!std::getline(in, line)) {
      throw ParseError("model ends before " + std::to_string(*count) +
                           " support vectors",
                       line_no);
    }
    const auto fields = text::split(line, ' ');
    if (fields.size() != *dim + 2) {
      throw ParseError("support vector line has " +
                           std::to_string(fields.size()) + " fields",
                       line_no);
    }
    double alpha = 0.0;
    if (!text::parse_double(fields[0], alpha) || !(alpha > 0.0)) {
      throw ParseError("bad alpha", line_no);
    }
    LabeledExample e;
    if (fields[1] == "1") {
      e.label = ClassLabel::kPositive;
    } else if (fields[1] == "-1") {
      e.label = ClassLabel::kNegative;
    } else {
      throw ParseError("label must be 1 or -1", line_no);
    }
    e.features.resize(*dim);
    for (std::size_t k = 0; k < *dim; ++k) {
      if (!text::parse_double(fields[k + 2], e.features[k])) {
        throw ParseError("bad feature value", line_no);
      }
    }
    model.support.push_back(std::move(e));
    model.alphas.push_back(alpha);
  }
  return model;
}

void save_model(const std::string& path, const SvmModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_model(out, model);
}

SvmModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_model(in);
}

}  // namespace routepred::svm
