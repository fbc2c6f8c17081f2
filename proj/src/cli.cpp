#include "routepred/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>

#include "routepred/dataset_io.hpp"
#include "routepred/errors.hpp"
#include "routepred/eval_pipeline.hpp"
#include "routepred/svg_plot.hpp"
#include "routepred/svm.hpp"
#include "routepred/text.hpp"

namespace routepred::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double real_value(std::string_view key, std::string_view v) {
  double out = 0.0;
  if (!text::parse_double(trim(v), out)) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::size_t size_value(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  if (!text::parse_size(trim(v), out)) {
    throw ConfigError(std::string(key),
                      "expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::optional<plot::AxisRange> parse_range(const std::string& field,
                                           const std::string& spec) {
  if (spec.empty() || spec == "auto") return std::nullopt;
  const auto parts = text::split(spec, ':');
  if (parts.size() != 2) throw ConfigError(field, "expected lo:hi or auto");
  return plot::AxisRange{real_value(field, parts[0]), real_value(field, parts[1])};
}

svm::KernelSpec kernel_from_flags(const std::string& family, std::optional<int> degree,
                                  std::optional<double> gamma,
                                  std::optional<double> coef0) {
  const auto f = svm::parse_kernel_family(family);
  if (!f) throw ConfigError("kernel", "unknown kernel family '" + family + "'");
  svm::KernelSpec k;
  k.family = *f;
  k.degree = degree;
  k.gamma = gamma;
  k.coef0 = coef0;
  k.validate();
  return k;
}

// Options shared by commands that train a model.
struct TrainFlags {
  std::string kernel = "linear";
  std::optional<int> degree;
  std::optional<double> gamma;
  std::optional<double> coef0;
  svm::TrainConfig cfg;
  bool no_standardize = false;
  std::size_t train_size = kDefaultTrainSize;
  std::uint64_t seed = kDefaultSeed;

  void add_to(CLI::App& app) {
    app.add_option("--kernel", kernel, "linear, polynomial, rbf or sigmoid")
        ->capture_default_str();
    app.add_option("--degree", degree, "polynomial degree (default 3)");
    app.add_option("--gamma", gamma, "kernel gamma (default 1/(d*var))");
    app.add_option("--coef0", coef0, "kernel coef0 (default 0)");
    app.add_option("--C", cfg.C, "soft-margin box constraint")->capture_default_str();
    app.add_option("--tol", cfg.tol, "KKT tolerance")->capture_default_str();
    app.add_option("--max-passes", cfg.max_passes, "iteration cap in passes of n")
        ->capture_default_str();
    app.add_flag("--no-standardize", no_standardize,
                 "train on raw coordinates instead of standardized ones");
    app.add_option("--train-size", train_size, "training vehicles")->capture_default_str();
    app.add_option("--seed", seed, "sampling seed")->capture_default_str();
  }

  svm::KernelSpec kernel_spec() const { return kernel_from_flags(kernel, degree, gamma, coef0); }
  svm::TrainConfig train_config() const {
    svm::TrainConfig c = cfg;
    c.standardize = !no_standardize;
    c.validate();
    return c;
  }
};

struct PlotFlags {
  int width = 800;
  int height = 500;
  bool no_shade = false;
  std::string x_range = "auto";
  std::string y_range = "auto";
  std::string title;

  void add_to(CLI::App& app) {
    app.add_option("--width", width, "pixels")->capture_default_str();
    app.add_option("--height", height, "pixels")->capture_default_str();
    app.add_flag("--no-shade", no_shade, "omit the shaded class regions");
    app.add_option("--x-range", x_range, "lo:hi or auto")->capture_default_str();
    app.add_option("--y-range", y_range, "lo:hi or auto")->capture_default_str();
    app.add_option("--title", title, "caption drawn above the plot");
  }

  plot::PlotSpec spec() const {
    plot::PlotSpec s;
    s.width = width;
    s.height = height;
    s.shade_regions = !no_shade;
    s.x_range = parse_range("x-range", x_range);
    s.y_range = parse_range("y-range", y_range);
    s.title = title;
    s.validate();
    return s;
  }
};

void print_model_summary(const svm::SvmModel& model, std::ostream& out) {
  out << "support vectors: " << model.support.size() << '\n';
  out << "converged: " << (model.summary.converged ? "yes" : "no") << " ("
      << model.summary.iterations << " iterations)\n";
  out << "boundary: " << eval::describe(eval::boundary_report(model)) << '\n';
}

// --- generate -------------------------------------------------------------

struct GenerateOpts {
  std::string config_path;
  std::optional<std::size_t> vehicles;
  std::optional<std::size_t> steps;
  std::optional<std::uint64_t> seed;
  std::optional<double> route2_prob;
  std::optional<double> spacing;
  std::optional<double> noise;
  std::string output;
};

sim::ScenarioConfig scenario_from(const GenerateOpts& o) {
  sim::ScenarioConfig c;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw IoError("cannot open " + o.config_path);
    c = parse_scenario_config(in, c);
  }
  // Flags win over the file.
  if (o.vehicles) c.num_vehicles = *o.vehicles;
  if (o.steps) c.num_steps = *o.steps;
  if (o.seed) c.rng_seed = *o.seed;
  if (o.route2_prob) c.route2_probability = *o.route2_prob;
  if (o.spacing) c.spawn_spacing = *o.spacing;
  if (o.noise) c.lane_noise = *o.noise;
  c.validate();
  return c;
}

int cmd_generate(const GenerateOpts& o, std::ostream& out) {
  const sim::ScenarioConfig c = scenario_from(o);
  const sim::Trace trace = sim::generate_trace(c);
  io::write_trace_csv(trace, o.output);
  out << "vehicles: " << c.num_vehicles << '\n'
      << "points: " << trace.points.size() << '\n'
      << "wrote " << o.output << '\n';
  return kOk;
}

// --- train ----------------------------------------------------------------

struct TrainOpts {
  std::string trace;
  TrainFlags flags;
  std::string output;
};

int cmd_train(const TrainOpts& o, std::ostream& out) {
  const svm::KernelSpec kernel = o.flags.kernel_spec();
  const svm::TrainConfig cfg = o.flags.train_config();
  const sim::Trace trace = io::read_trace_csv(o.trace);
  const io::Dataset train = io::sample_examples(trace, o.flags.train_size, o.flags.seed);
  const svm::SvmModel model = svm::train(train.examples, kernel, cfg);
  svm::save_model(o.output, model);
  print_model_summary(model, out);
  out << "wrote " << o.output << '\n';
  return kOk;
}

// --- sweep ----------------------------------------------------------------

struct SweepOpts {
  std::string trace;
  std::string model;
  TrainFlags flags;
  std::string test_sizes = "10:100:10";
  std::string output;
};

int cmd_sweep(const SweepOpts& o, std::ostream& out) {
  const std::vector<std::size_t> sizes = parse_test_sizes(o.test_sizes);
  eval::EvaluationReport report;
  if (!o.model.empty()) {
    const svm::SvmModel model = svm::load_model(o.model);
    const sim::Trace trace = io::read_trace_csv(o.trace);
    report = eval::sweep_model(model, trace, o.flags.train_size, sizes, o.flags.seed);
  } else {
    const svm::KernelSpec kernel = o.flags.kernel_spec();
    const svm::TrainConfig cfg = o.flags.train_config();
    const sim::Trace trace = io::read_trace_csv(o.trace);
    report = eval::accuracy_sweep(trace, o.flags.train_size, sizes, kernel, cfg,
                                  o.flags.seed);
  }
  eval::write_report_csv(report, o.output);
  out << eval::format_table(report);
  return kOk;
}

// --- plot -----------------------------------------------------------------

struct PlotOpts {
  std::string model;
  std::string data;
  std::string svg;
  PlotFlags flags;
};

int cmd_plot(const PlotOpts& o, std::ostream& out) {
  const plot::PlotSpec spec = o.flags.spec();
  const svm::SvmModel model = svm::load_model(o.model);
  const io::Dataset data = io::read_dataset_csv(o.data);
  plot::write_svg(model, data, spec, o.svg);
  std::size_t misses = 0;
  for (const auto& e : data.examples) {
    if (svm::classify(model, e.features) != e.label) ++misses;
  }
  out << "examples: " << data.examples.size() << '\n'
      << "misclassified: " << misses << '\n'
      << "wrote " << o.svg << '\n';
  return kOk;
}

// --- sample ---------------------------------------------------------------

struct SampleOpts {
  std::string trace;
  std::size_t size = 0;
  std::uint64_t seed = kDefaultSeed;
  std::size_t train_size = kDefaultTrainSize;
  std::string role = "train";
  std::string output;
};

int cmd_sample(const SampleOpts& o, std::ostream& out) {
  if (o.role != "train" && o.role != "test") {
    throw ConfigError("role", "expected train or test, got '" + o.role + "'");
  }
  const sim::Trace trace = io::read_trace_csv(o.trace);
  const io::Dataset data = o.role == "train"
                               ? io::sample_examples(trace, o.size, o.seed)
                               : io::sample_test_set(trace, o.train_size, o.size, o.seed);
  io::write_dataset_csv(data, o.output);
  out << "examples: " << data.examples.size() << '\n' << "wrote " << o.output << '\n';
  return kOk;
}

// --- import-fcd -----------------------------------------------------------

struct ImportOpts {
  std::string fcd;
  std::string labels;
  std::string output;
};

int cmd_import(const ImportOpts& o, std::ostream& out) {
  const io::LabelTable labels = io::read_label_csv(o.labels);
  const io::FcdImport imported = io::read_fcd_xml_file(o.fcd, labels);
  io::write_trace_csv(imported.trace, o.output);
  out << "points: " << imported.trace.points.size() << '\n'
      << "skipped vehicles without label: " << imported.skipped_vehicles << " ("
      << imported.skipped_points << " points)\n"
      << "wrote " << o.output << '\n';
  return kOk;
}

// --- run-paper ------------------------------------------------------------

struct RunPaperOpts {
  std::uint64_t seed = kDefaultSeed;
  std::string report;
  std::string trace_out;
  std::string model_out;
  std::string svg_train;
  std::string svg_test10;
  std::string svg_test100;
};

int cmd_run_paper(const RunPaperOpts& o, std::ostream& out) {
  sim::ScenarioConfig scenario;
  scenario.rng_seed = o.seed;
  const sim::Trace trace = sim::generate_trace(scenario);
  if (!o.trace_out.empty()) io::write_trace_csv(trace, o.trace_out);

  const io::Dataset train = io::sample_examples(trace, kDefaultTrainSize, o.seed);
  const svm::SvmModel model =
      svm::train(train.examples, svm::KernelSpec::linear(), svm::TrainConfig{});
  if (!o.model_out.empty()) svm::save_model(o.model_out, model);

  const std::vector<std::size_t> sizes = parse_test_sizes("10:100:10");
  const eval::EvaluationReport report =
      eval::sweep_model(model, trace, kDefaultTrainSize, sizes, o.seed);
  eval::write_report_csv(report, o.report);

  const auto plot_to = [&](const std::string& path, const io::Dataset& data,
                           const std::string& title) {
    if (path.empty()) return;
    plot::PlotSpec spec;
    spec.title = title;
    plot::write_svg(model, data, spec, path);
  };
  plot_to(o.svg_train, train, "training set, 400 examples");
  plot_to(o.svg_test10, io::sample_test_set(trace, kDefaultTrainSize, 10, o.seed),
          "test set, 10 examples");
  plot_to(o.svg_test100, io::sample_test_set(trace, kDefaultTrainSize, 100, o.seed),
          "test set, 100 examples");

  out << "vehicles: " << scenario.num_vehicles << ", points: " << trace.points.size()
      << '\n';
  print_model_summary(model, out);
  out << eval::format_table(report);
  return kOk;
}

}  // namespace

sim::ScenarioConfig parse_scenario_config(std::istream& in, sim::ScenarioConfig base) {
  sim::ScenarioConfig c = base;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "num_vehicles") {
      c.num_vehicles = size_value(key, value);
    } else if (key == "num_steps") {
      c.num_steps = size_value(key, value);
    } else if (key == "lane_y") {
      const auto parts = text::split(value, ',');
      if (parts.size() != c.lane_y.size()) throw ConfigError(key, "expected three values");
      for (std::size_t k = 0; k < parts.size(); ++k) c.lane_y[k] = real_value(key, parts[k]);
    } else if (key == "junction_x") {
      c.junction_x = real_value(key, value);
    } else if (key == "ramp_end_x") {
      c.ramp_end.x = real_value(key, value);
    } else if (key == "ramp_end_y") {
      c.ramp_end.y = real_value(key, value);
    } else if (key == "speed_min") {
      c.speed_range.lo = real_value(key, value);
    } else if (key == "speed_max") {
      c.speed_range.hi = real_value(key, value);
    } else if (key == "route2_probability") {
      c.route2_probability = real_value(key, value);
    } else if (key == "spawn_x") {
      c.spawn_x = real_value(key, value);
    } else if (key == "spawn_spacing") {
      c.spawn_spacing = real_value(key, value);
    } else if (key == "lane_noise") {
      c.lane_noise = real_value(key, value);
    } else if (key == "rng_seed") {
      c.rng_seed = size_value(key, value);
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
  if (in.bad()) throw IoError("failed to read configuration");
  return c;
}

std::vector<std::size_t> parse_test_sizes(std::string_view spec) {
  std::vector<std::size_t> sizes;
  const auto value = [](std::string_view s) {
    std::size_t v = 0;
    if (!text::parse_size(trim(s), v) || v == 0) {
      throw ConfigError("test-sizes", "expected a positive integer, got '" +
                                          std::string(s) + "'");
    }
    return v;
  };
  if (spec.find(':') != std::string_view::npos) {
    const auto parts = text::split(spec, ':');
    if (parts.size() != 3) throw ConfigError("test-sizes", "expected first:last:step");
    const std::size_t first = value(parts[0]);
    const std::size_t last = value(parts[1]);
    const std::size_t step = value(parts[2]);
    if (last < first) throw ConfigError("test-sizes", "last is below first");
    for (std::size_t n = first; n <= last; n += step) sizes.push_back(n);
  } else {
    for (auto part : text::split(spec, ',')) sizes.push_back(value(part));
  }
  return sizes;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Route prediction at a highway off-ramp with a hand-written SVM",
               "routepred"};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* generate = app.add_subcommand("generate", "simulate a scenario and write a trace CSV");
  generate->add_option("--config", gen.config_path, "key=value scenario file");
  generate->add_option("--vehicles", gen.vehicles, "number of vehicles (600)");
  generate->add_option("--steps", gen.steps, "time steps (100)");
  generate->add_option("--seed", gen.seed, "scenario seed (7)");
  generate->add_option("--route2-prob", gen.route2_prob, "off-ramp probability (0.5)");
  generate->add_option("--spacing", gen.spacing, "spawn spacing in meters (0.3)");
  generate->add_option("--noise", gen.noise, "lane jitter half-width (0.05)");
  generate->add_option("-o,--output", gen.output, "trace CSV")->required();

  TrainOpts tr;
  auto* train = app.add_subcommand("train", "train an SVM on sampled examples");
  train->add_option("trace", tr.trace, "trace CSV")->required();
  tr.flags.add_to(*train);
  train->add_option("-o,--output", tr.output, "model file")->required();

  SweepOpts sw;
  auto* sweep = app.add_subcommand("sweep", "accuracy over several test-set sizes");
  sweep->add_option("trace", sw.trace, "trace CSV")->required();
  sweep->add_option("--model", sw.model, "use this model instead of training one");
  sw.flags.add_to(*sweep);
  sweep->add_option("--test-sizes", sw.test_sizes, "first:last:step or a,b,c")
      ->capture_default_str();
  sweep->add_option("-o,--output", sw.output, "report CSV")->required();

  PlotOpts pl;
  auto* plot_cmd = app.add_subcommand("plot", "render a dataset and boundary as SVG");
  plot_cmd->add_option("--model", pl.model, "model file")->required();
  plot_cmd->add_option("--data", pl.data, "dataset CSV")->required();
  plot_cmd->add_option("--svg", pl.svg, "SVG output")->required();
  pl.flags.add_to(*plot_cmd);

  SampleOpts sa;
  auto* sample = app.add_subcommand("sample", "write a sampled dataset CSV");
  sample->add_option("trace", sa.trace, "trace CSV")->required();
  sample->add_option("--size", sa.size, "number of examples")->required();
  sample->add_option("--seed", sa.seed, "sampling seed")->capture_default_str();
  sample->add_option("--train-size", sa.train_size, "training vehicles excluded from test sets")
      ->capture_default_str();
  sample->add_option("--role", sa.role, "train or test")->capture_default_str();
  sample->add_option("-o,--output", sa.output, "dataset CSV")->required();

  ImportOpts im;
  auto* import = app.add_subcommand("import-fcd", "convert SUMO FCD XML to a trace CSV");
  import->add_option("fcd", im.fcd, "FCD XML file")->required();
  import->add_option("--labels", im.labels, "vehicle_id,route_label CSV")->required();
  import->add_option("-o,--output", im.output, "trace CSV")->required();

  RunPaperOpts rp;
  auto* run_paper = app.add_subcommand(
      "run-paper", "default scenario: generate, train on 400, sweep 10..100, plot");
  run_paper->add_option("--seed", rp.seed, "scenario and sampling seed")->capture_default_str();
  run_paper->add_option("-o,--output", rp.report, "report CSV")->required();
  run_paper->add_option("--trace-out", rp.trace_out, "also write the trace CSV");
  run_paper->add_option("--model-out", rp.model_out, "also write the model");
  run_paper->add_option("--svg-train", rp.svg_train, "plot of the training set");
  run_paper->add_option("--svg-test10", rp.svg_test10, "plot of the 10-example test set");
  run_paper->add_option("--svg-test100", rp.svg_test100, "plot of the 100-example test set");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*generate) return cmd_generate(gen, out);
    if (*train) return cmd_train(tr, out);
    if (*sweep) return cmd_sweep(sw, out);
    if (*plot_cmd) return cmd_plot(pl, out);
    if (*sample) return cmd_sample(sa, out);
    if (*import) return cmd_import(im, out);
    if (*run_paper) return cmd_run_paper(rp, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedKernel& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataFailure;
  } catch (const std::exception& e) {
    // Resource failures (allocation, filesystem) rather than bad input.
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  }
  return kUsage;
}

}  // namespace routepred::cli
