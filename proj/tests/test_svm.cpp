#include <doctest.h>

#include <cmath>
#include <sstream>

#include "routepred/errors.hpp"
#include "routepred/random.hpp"
#include "routepred/svm.hpp"
#include "support/hard_margin_oracle.hpp"

using namespace routepred;
using namespace routepred::svm;

namespace {

constexpr auto kPos = ClassLabel::kPositive;
constexpr auto kNeg = ClassLabel::kNegative;

TrainConfig raw_config(double C = 1.0, double tol = 1e-3) {
  TrainConfig cfg;
  cfg.C = C;
  cfg.tol = tol;
  cfg.standardize = false;
  return cfg;
}

// Two Gaussian-ish clouds around (+s, +s) and (-s, -s); overlap grows as s
// shrinks.
std::vector<LabeledExample> clouds(std::uint64_t seed, std::size_t n, double s) {
  Rng rng(seed);
  std::vector<LabeledExample> data;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    const double cx = pos ? s : -s;
    data.push_back({{cx + rng.uniform(-1.0, 1.0), cx + rng.uniform(-1.0, 1.0)},
                    pos ? kPos : kNeg});
  }
  return data;
}

double train_accuracy(const SvmModel& m, const std::vector<LabeledExample>& data) {
  std::size_t ok = 0;
  for (const auto& e : data) ok += classify(m, e.features) == e.label;
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

// KKT case split on the full training set, within `tol` on y*f(x).
void check_kkt(const SvmModel& m, const std::vector<LabeledExample>& data, double C,
               double tol) {
  std::vector<double> alpha(data.size(), 0.0);
  for (std::size_t k = 0; k < m.summary.support_indices.size(); ++k) {
    alpha[m.summary.support_indices[k]] = m.alphas[k];
  }
  double balance = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double yf = functional_margin(m, data[i]);
    balance += alpha[i] * sign_of(data[i].label);
    if (alpha[i] == 0.0) {
      CHECK(yf >= 1.0 - tol);
    } else if (alpha[i] >= C) {
      CHECK(yf <= 1.0 + tol);
    } else {
      CHECK(std::abs(yf - 1.0) <= tol);
    }
    CHECK(alpha[i] >= 0.0);
    CHECK(alpha[i] <= C);
  }
  CHECK(std::abs(balance) <= tol);
}

}  // namespace

TEST_CASE("kernel family names round-trip") {
  for (auto f : {KernelFamily::kLinear, KernelFamily::kPolynomial, KernelFamily::kRbf,
                 KernelFamily::kSigmoid}) {
    CHECK(parse_kernel_family(to_string(f)) == f);
  }
  CHECK(parse_kernel_family("poly") == KernelFamily::kPolynomial);
  CHECK_FALSE(parse_kernel_family("laplace").has_value());
}

TEST_CASE("kernel spec validation") {
  CHECK_NOTHROW(KernelSpec::linear().validate());
  KernelSpec k = KernelSpec::linear();
  k.gamma = 1.0;
  CHECK_THROWS_AS(k.validate(), ConfigError);
  CHECK_THROWS_AS(KernelSpec::polynomial(0).validate(), ConfigError);
  CHECK_THROWS_AS(KernelSpec::rbf(0.0).validate(), ConfigError);
  CHECK_THROWS_AS(KernelSpec::rbf(-1.0).validate(), ConfigError);
  CHECK_THROWS_AS(KernelSpec::sigmoid(1.0, NAN).validate(), ConfigError);
  CHECK_FALSE(KernelSpec::rbf().complete());
  CHECK(KernelSpec::rbf(0.5).complete());
  CHECK(KernelSpec::linear().complete());
}

TEST_CASE("kernel values against hand computation") {
  const Vector a{1.0, 2.0};
  const Vector b{3.0, -1.0};
  CHECK(kernel_eval(KernelSpec::linear(), a, b) == doctest::Approx(1.0));
  CHECK(kernel_eval(KernelSpec::polynomial(2, 0.5, 1.0), a, b) == doctest::Approx(2.25));
  CHECK(kernel_eval(KernelSpec::rbf(0.1), a, b) == doctest::Approx(std::exp(-1.3)));
  CHECK(kernel_eval(KernelSpec::sigmoid(0.5, -1.0), a, b) == doctest::Approx(std::tanh(-0.5)));
  CHECK(kernel_eval(KernelSpec::rbf(3.7), a, a) == 1.0);

  CHECK_THROWS_AS(kernel_eval(KernelSpec::linear(), a, Vector{1.0}), DimensionMismatch);
  CHECK_THROWS_AS(kernel_eval(KernelSpec::rbf(), a, b), ConfigError);
}

TEST_CASE("kernel symmetry on random pairs") {
  Rng rng(99);
  const KernelSpec specs[] = {KernelSpec::linear(), KernelSpec::polynomial(3, 0.7, 1.0),
                              KernelSpec::rbf(0.9), KernelSpec::sigmoid(0.3, -0.2)};
  for (int t = 0; t < 200; ++t) {
    Vector a(3), b(3);
    for (auto& v : a) v = rng.uniform(-5.0, 5.0);
    for (auto& v : b) v = rng.uniform(-5.0, 5.0);
    for (const auto& k : specs) CHECK(kernel_eval(k, a, b) == kernel_eval(k, b, a));
  }
}

TEST_CASE("with_defaults fills unset parameters only") {
  const std::vector<LabeledExample> data{{{0.0, 2.0}, kPos}, {{2.0, 4.0}, kNeg}};
  // Entries 0, 2, 2, 4: mean 2, population variance 2.
  const auto rbf = with_defaults(KernelSpec::rbf(), data);
  REQUIRE(rbf.gamma.has_value());
  CHECK(*rbf.gamma == doctest::Approx(1.0 / (2.0 * 2.0)));
  const auto poly = with_defaults(KernelSpec::polynomial(), data);
  CHECK(poly.degree == 3);
  CHECK(poly.coef0 == 0.0);
  CHECK(with_defaults(KernelSpec::rbf(0.25), data).gamma == 0.25);
  CHECK_FALSE(with_defaults(KernelSpec::linear(), data).gamma.has_value());
}

TEST_CASE("classification rule is sign of the decision value with ties to +1") {
  CHECK(classify_value(0.0) == kPos);
  CHECK(classify_value(-0.0) == kPos);
  CHECK(classify_value(1e-300) == kPos);
  CHECK(classify_value(-1e-300) == kNeg);

  SvmModel m;
  m.support = {{{1.0, 0.0}, kPos}, {{-1.0, 0.0}, kNeg}};
  m.alphas = {0.5, 0.5};
  m.bias = 0.25;
  CHECK(decision_value(m, Vector{2.0, 7.0}) == doctest::Approx(2.25));
  CHECK(weight_norm(m) == doctest::Approx(1.0));
  CHECK(functional_margin(m, {{-3.0, 0.0}, kNeg}) == doctest::Approx(2.75));
  CHECK(geometric_margin(m, {{-3.0, 0.0}, kNeg}) == doctest::Approx(2.75));

  Rng rng(4);
  for (int t = 0; t < 500; ++t) {
    const Vector x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    CHECK((classify(m, x) == kPos) == (decision_value(m, x) >= 0.0));
  }
}

TEST_CASE("zero weight vector raises ZeroNorm") {
  SvmModel m;
  m.support = {{{1.0, 1.0}, kPos}, {{1.0, 1.0}, kNeg}};
  m.alphas = {0.3, 0.3};
  CHECK_THROWS_AS(weight_norm(m), ZeroNorm);
  CHECK_THROWS_AS(geometric_margin(m, {{0.0, 0.0}, kPos}), ZeroNorm);
}

TEST_CASE("training input errors") {
  const auto linear = KernelSpec::linear();
  const TrainConfig cfg;
  CHECK_THROWS_AS(train({}, linear, cfg), DataError);
  const std::vector<LabeledExample> single{{{0.0, 0.0}, kPos}, {{1.0, 0.0}, kPos}};
  CHECK_THROWS_AS(train(single, linear, cfg), DataError);
  const std::vector<LabeledExample> nan{{{NAN, 0.0}, kPos}, {{1.0, 0.0}, kNeg}};
  CHECK_THROWS_AS(train(nan, linear, cfg), DataError);
  const std::vector<LabeledExample> ragged{{{0.0, 0.0}, kPos}, {{1.0}, kNeg}};
  CHECK_THROWS_AS(train(ragged, linear, cfg), DimensionMismatch);

  const std::vector<LabeledExample> ok{{{0.0, 0.0}, kPos}, {{1.0, 0.0}, kNeg}};
  TrainConfig bad;
  bad.C = 0.0;
  CHECK_THROWS_AS(train(ok, linear, bad), ConfigError);
  bad = {};
  bad.tol = -1.0;
  CHECK_THROWS_AS(train(ok, linear, bad), ConfigError);
  bad = {};
  bad.max_passes = 0;
  CHECK_THROWS_AS(train(ok, linear, bad), ConfigError);
  CHECK_THROWS_AS(train(ok, KernelSpec::rbf(-2.0), cfg), ConfigError);
}

TEST_CASE("two-point hard margin has the closed-form solution") {
  const std::vector<LabeledExample> data{{{1.0, 0.0}, kPos}, {{-1.0, 0.0}, kNeg}};
  const auto m = train(data, KernelSpec::linear(), raw_config(1e6, 1e-9));
  CHECK(m.summary.converged);
  REQUIRE(m.support.size() == 2);
  CHECK(m.alphas[0] == doctest::Approx(0.5));
  CHECK(m.alphas[1] == doctest::Approx(0.5));
  const auto h = extract_hyperplane(m);
  CHECK(h.w[0] == doctest::Approx(1.0));
  CHECK(h.w[1] == doctest::Approx(0.0));
  CHECK(h.bias == doctest::Approx(0.0));
  CHECK(dual_objective(m) == doctest::Approx(0.5));
}

TEST_CASE("hard-margin training matches the brute-force oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    const double angle = rng.uniform(0.0, 6.283185307179586);
    const double nx = std::cos(angle), ny = std::sin(angle), c = rng.uniform(-0.5, 0.5);
    std::vector<LabeledExample> data;
    std::vector<oracle::Pt> pts;
    while (data.size() < n) {
      const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
      const double d = nx * x + ny * y + c;
      if (std::abs(d) < 0.05) continue;
      // Alternate classes so both appear.
      const int want = data.size() % 2 == 0 ? 1 : -1;
      if ((d > 0 ? 1 : -1) != want) continue;
      data.push_back({{x, y}, want > 0 ? kPos : kNeg});
      pts.push_back({x, y, want});
    }
    const auto best = oracle::max_margin(pts);
    REQUIRE(best.has_value());
    const auto m = train(data, KernelSpec::linear(), raw_config(1e6, 1e-6));
    double margin = INFINITY;
    for (const auto& e : data) margin = std::min(margin, geometric_margin(m, e));
    CHECK(margin == doctest::Approx(best->margin).epsilon(1e-3));
  }
}

TEST_CASE("KKT conditions and dual ascent after training") {
  for (double C : {0.1, 1.0, 10.0}) {
    for (double s : {2.0, 0.4}) {
      const auto data = clouds(17 + static_cast<std::uint64_t>(C * 10), 120, s);
      TrainConfig cfg;
      cfg.C = C;
      const auto m = train(data, KernelSpec::linear(), cfg);
      REQUIRE(m.summary.converged);
      CHECK(m.summary.max_violation <= cfg.tol);
      check_kkt(m, data, C, cfg.tol);
      const auto& hist = m.summary.objective_history;
      REQUIRE(hist.size() >= 2);
      for (std::size_t k = 1; k < hist.size(); ++k) {
        CHECK(hist[k] >= hist[k - 1] - 1e-12 * std::max(1.0, std::abs(hist[k - 1])));
      }
      CHECK(hist.back() == doctest::Approx(dual_objective(m)));
    }
  }
}

TEST_CASE("KKT holds for nonlinear kernels too") {
  const auto data = clouds(5, 80, 0.5);
  for (const auto& k : {KernelSpec::rbf(), KernelSpec::polynomial(2)}) {
    TrainConfig cfg;
    cfg.C = 1.0;
    const auto m = train(data, k, cfg);
    REQUIRE(m.summary.converged);
    CHECK(m.kernel.complete());
    check_kkt(m, data, cfg.C, cfg.tol);
  }
}

TEST_CASE("support vectors are exactly the examples with positive alpha") {
  const auto data = clouds(8, 60, 1.0);
  const auto m = train(data, KernelSpec::linear(), TrainConfig{});
  REQUIRE(m.support.size() == m.alphas.size());
  REQUIRE(m.support.size() == m.summary.support_indices.size());
  for (std::size_t k = 0; k < m.support.size(); ++k) {
    CHECK(m.alphas[k] > 0.0);
    CHECK(m.support[k].label == data[m.summary.support_indices[k]].label);
  }
}

TEST_CASE("XOR needs a nonlinear kernel") {
  const std::vector<LabeledExample> xor_set{{{0.0, 0.0}, kNeg},
                                            {{1.0, 1.0}, kNeg},
                                            {{0.0, 1.0}, kPos},
                                            {{1.0, 0.0}, kPos}};
  TrainConfig cfg;
  cfg.C = 10.0;
  const auto rbf = train(xor_set, KernelSpec::rbf(1.0), cfg);
  CHECK(train_accuracy(rbf, xor_set) == 1.0);
  const auto lin = train(xor_set, KernelSpec::linear(), cfg);
  CHECK(train_accuracy(lin, xor_set) <= 0.75);
}

TEST_CASE("training is deterministic") {
  const auto data = clouds(21, 150, 0.5);
  const auto a = train(data, KernelSpec::linear(), TrainConfig{});
  const auto b = train(data, KernelSpec::linear(), TrainConfig{});
  CHECK(a.alphas == b.alphas);
  CHECK(a.bias == b.bias);
  CHECK(a.summary.iterations == b.summary.iterations);
}

TEST_CASE("scan-order seed does not change the optimum beyond tolerance") {
  const auto data = clouds(22, 150, 0.6);
  TrainConfig cfg;
  cfg.tol = 1e-6;
  const auto a = train(data, KernelSpec::linear(), cfg);
  cfg.rng_seed = 12345;
  const auto b = train(data, KernelSpec::linear(), cfg);
  CHECK(dual_objective(a) == doctest::Approx(dual_objective(b)).epsilon(1e-6));
}

TEST_CASE("standardized training is invariant to affine rescaling of the inputs") {
  const auto data = clouds(23, 100, 0.7);
  auto scaled = data;
  for (auto& e : scaled) {
    e.features[0] = 1000.0 * e.features[0] + 250.0;
    e.features[1] = 0.01 * e.features[1] - 3.0;
  }
  const auto a = train(data, KernelSpec::linear(), TrainConfig{});
  const auto b = train(scaled, KernelSpec::linear(), TrainConfig{});
  CHECK(a.support.size() == b.support.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(decision_value(a, data[i].features) ==
          doctest::Approx(decision_value(b, scaled[i].features)).epsilon(1e-6));
  }
}

TEST_CASE("standardizer maps hyperplanes back to raw coordinates") {
  const auto data = clouds(24, 50, 1.0);
  const auto st = Standardizer::fit(data);
  const Hyperplane h{{0.7, -1.3}, 0.4};
  const auto raw = st.to_raw(h);
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const LabeledExample e{{rng.uniform(-5, 5), rng.uniform(-5, 5)}, kPos};
    const auto z = st.apply(e);
    const double standardized = h.w[0] * z.features[0] + h.w[1] * z.features[1] + h.bias;
    const double direct = raw.w[0] * e.features[0] + raw.w[1] * e.features[1] + raw.bias;
    CHECK(direct == doctest::Approx(standardized));
  }

  const std::vector<LabeledExample> constant{{{5.0, 1.0}, kPos}, {{5.0, 3.0}, kNeg}};
  CHECK(Standardizer::fit(constant).scale[0] == 1.0);
}

TEST_CASE("extract_hyperplane agrees with the decision function") {
  const auto data = clouds(25, 80, 0.8);
  const auto m = train(data, KernelSpec::linear(), TrainConfig{});
  const auto h = extract_hyperplane(m);
  for (const auto& e : data) {
    const double z = h.w[0] * e.features[0] + h.w[1] * e.features[1] + h.bias;
    CHECK(z == doctest::Approx(decision_value(m, e.features)).epsilon(1e-9));
  }
  const auto rbf = train(data, KernelSpec::rbf(), TrainConfig{});
  CHECK_THROWS_AS(extract_hyperplane(rbf), UnsupportedKernel);
  CHECK_THROWS_AS(extract_hyperplane(SvmModel{}), DataError);
}

TEST_CASE("model files round-trip bit-exactly") {
  const auto data = clouds(26, 60, 0.5);
  for (const auto& k : {KernelSpec::linear(), KernelSpec::rbf(0.5),
                        KernelSpec::polynomial(2, 0.3, 1.5), KernelSpec::sigmoid(0.1, -0.5)}) {
    for (bool standardize : {true, false}) {
      TrainConfig cfg;
      cfg.standardize = standardize;
      cfg.max_passes = 20;
      const auto m = train(data, k, cfg);
      std::stringstream ss;
      write_model(ss, m);
      const auto r = read_model(ss);
      CHECK(r.support == m.support);
      CHECK(r.alphas == m.alphas);
      CHECK(r.bias == m.bias);
      CHECK(r.kernel == m.kernel);
      CHECK(r.scaling == m.scaling);
      CHECK(r.summary.converged == m.summary.converged);
      std::stringstream again;
      write_model(again, r);
      CHECK(again.str() == ss.str());
    }
  }
}

TEST_CASE("malformed model files report the line") {
  const auto parse_line = [](const std::string& doc) -> std::size_t {
    std::istringstream in(doc);
    try {
      read_model(in);
    } catch (const ParseError& e) {
      return e.location();
    }
    return 0;
  };
  const std::string header =
      "routepred-svm v1 family=linear degree=- gamma=- coef0=- bias=0.5 dim=2 count=2 "
      "converged=1 mean=- scale=-\n";
  CHECK(parse_line(header + "0.5 1 1 0\n0.5 -1 -1 0\n") == 0);
  CHECK(parse_line("") == 1);
  CHECK(parse_line("something else\n") == 1);
  CHECK(parse_line("routepred-svm v9 family=linear\n") == 1);
  CHECK(parse_line("routepred-svm v1 family=linear bias=0 dim=2\n") == 1);
  CHECK(parse_line(header + "0.5 1 1 0\n") == 3);
  CHECK(parse_line(header + "0.5 1 1 0\n0.5 -1 x 0\n") == 3);
  CHECK(parse_line(header + "0.5 1 1\n") == 2);
  CHECK(parse_line(header + "-0.5 1 1 0\n0.5 -1 -1 0\n") == 2);
  CHECK(parse_line(header + "0.5 2 1 0\n0.5 -1 -1 0\n") == 2);
}
