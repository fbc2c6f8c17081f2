#include "routepred/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <numeric>
#include <ostream>
#include <set>
#include <span>

#include "routepred/errors.hpp"
#include "routepred/random.hpp"
#include "routepred/text.hpp"
#include "xml_reader.hpp"

namespace routepred::io {

namespace {

// Sub-stream ids under the caller's seed.
constexpr std::uint64_t kShuffleStream = 0;
constexpr std::uint64_t kTrainStepStream = 1;
constexpr std::uint64_t kTestStepStream = 2;
constexpr std::uint64_t kOverlapShuffleStream = 3;
constexpr std::uint64_t kTestSetStream = 4;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

void finish_write(std::ostream& out, const char* what) {
  out.flush();
  if (!out) throw IoError(std::string("failed to write ") + what);
}

// Line-oriented reader that tolerates CRLF and a UTF-8 byte order mark.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) {
      if (in_.bad()) throw IoError("read failure");
      return false;
    }
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (number_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    return true;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

void expect_header(LineReader& reader, std::string_view header) {
  std::string line;
  if (!reader.next(line)) {
    throw ParseError("missing header line, expected '" + std::string(header) + "'", 1);
  }
  if (line != header) {
    throw ParseError("malformed header '" + line + "', expected '" +
                         std::string(header) + "'",
                     1);
  }
}

[[noreturn]] void bad_row(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what, line);
}

std::vector<std::string_view> fields_of(const std::string& line,
                                        std::size_t expected,
                                        std::size_t line_no) {
  auto fields = text::split(line, ',');
  if (fields.size() != expected) {
    bad_row(line_no, "expected " + std::to_string(expected) + " fields, got " +
                         std::to_string(fields.size()));
  }
  return fields;
}

double real_field(std::string_view field, const char* name, std::size_t line_no) {
  double v = 0.0;
  if (!text::parse_double(field, v) || !std::isfinite(v)) {
    bad_row(line_no, std::string("field '") + name + "' is not a finite number: '" +
                         std::string(field) + "'");
  }
  return v;
}

sim::Route route_field(std::string_view field, std::size_t line_no) {
  if (field == "0") return sim::Route::kMainline;
  if (field == "1") return sim::Route::kOffRamp;
  bad_row(line_no, "route_label must be 0 or 1, got '" + std::string(field) + "'");
}

std::string_view id_field(std::string_view field, std::size_t line_no) {
  if (field.empty()) bad_row(line_no, "empty vehicle_id");
  if (field.find('"') != std::string_view::npos) {
    bad_row(line_no, "quoted fields are not supported");
  }
  return field;
}

void check_writable_id(const std::string& id) {
  if (id.empty() || id.find_first_of(",\"\r\n") != std::string::npos) {
    throw DataError("vehicle id '" + id + "' cannot be written to CSV");
  }
}

char route_char(sim::Route r) { return r == sim::Route::kMainline ? '0' : '1'; }

// Vehicles of a trace in id order with the indices of their points (in step
// order, since traces are canonical).
struct VehicleTable {
  std::vector<std::string> ids;
  std::vector<std::vector<std::size_t>> points;
};

VehicleTable index_vehicles(const sim::Trace& trace) {
  std::map<std::string_view, std::vector<std::size_t>> by_id;
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    by_id[trace.points[i].vehicle_id].push_back(i);
  }
  VehicleTable table;
  for (auto& [id, idx] : by_id) {
    table.ids.emplace_back(id);
    table.points.push_back(std::move(idx));
  }
  return table;
}

std::vector<std::size_t> shuffled(std::size_t count, Rng& rng) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = count; k > 1; --k) {
    std::swap(order[k - 1], order[rng.below(k)]);
  }
  return order;
}

void require_vehicles(std::size_t available, std::size_t needed) {
  if (available < needed) {
    throw DataError("trace has " + std::to_string(available) +
                    " vehicles, need " + std::to_string(needed));
  }
}

Dataset draw(const sim::Trace& trace, const VehicleTable& table,
             std::span<const std::size_t> vehicles, Rng& rng,
             std::uint64_t seed) {
  Dataset out;
  out.provenance = trace.config ? Provenance::kGenerated : Provenance::kImported;
  out.seed = seed;
  out.examples.reserve(vehicles.size());
  out.vehicle_ids.reserve(vehicles.size());
  for (std::size_t v : vehicles) {
    const auto& idx = table.points[v];
    const auto& p = trace.points[idx[rng.below(idx.size())]];
    out.examples.push_back({{p.x, p.y}, to_class_label(p.route)});
    out.vehicle_ids.push_back(p.vehicle_id);
  }
  return out;
}

}  // namespace

svm::ClassLabel to_class_label(sim::Route route) {
  return route == sim::Route::kMainline ? svm::ClassLabel::kPositive
                                        : svm::ClassLabel::kNegative;
}

sim::Route to_route(svm::ClassLabel label) {
  return label == svm::ClassLabel::kPositive ? sim::Route::kMainline
                                             : sim::Route::kOffRamp;
}

LabelTable labels_from_trace(const sim::Trace& trace) {
  LabelTable labels;
  for (const auto& p : trace.points) labels.emplace(p.vehicle_id, p.route);
  return labels;
}

// ---------------------------------------------------------------------------
// Trace CSV

void write_trace_csv(const sim::Trace& trace, std::ostream& out) {
  sim::validate_trace(trace);
  out << kTraceHeader << '\n';
  for (const auto& p : trace.points) {
    check_writable_id(p.vehicle_id);
    out << p.step << ',' << p.vehicle_id << ',' << text::format_g17(p.x) << ','
        << text::format_g17(p.y) << ',' << text::format_g17(p.speed) << ','
        << route_char(p.route) << '\n';
  }
  finish_write(out, "trace");
}

void write_trace_csv(const sim::Trace& trace, const std::string& path) {
  auto out = open_out(path);
  write_trace_csv(trace, out);
}

sim::Trace read_trace_csv(std::istream& in) {
  LineReader reader(in);
  expect_header(reader, kTraceHeader);
  sim::Trace trace;
  std::string line;
  while (reader.next(line)) {
    const std::size_t n = reader.number();
    const auto f = fields_of(line, 6, n);
    sim::TrajectoryPoint p;
    if (!text::parse_size(f[0], p.step)) {
      bad_row(n, "field 'step' is not a non-negative integer: '" +
                     std::string(f[0]) + "'");
    }
    p.vehicle_id = std::string(id_field(f[1], n));
    p.x = real_field(f[2], "x", n);
    p.y = real_field(f[3], "y", n);
    p.speed = real_field(f[4], "speed", n);
    p.route = route_field(f[5], n);
    trace.points.push_back(std::move(p));
  }
  std::stable_sort(trace.points.begin(), trace.points.end(), sim::canonical_less);
  sim::validate_trace(trace);
  return trace;
}

sim::Trace read_trace_csv(const std::string& path) {
  auto in = open_in(path);
  return read_trace_csv(in);
}

// ---------------------------------------------------------------------------
// Label sidecar

void write_label_csv(const LabelTable& labels, std::ostream& out) {
  out << "vehicle_id,route_label\n";
  for (const auto& [id, route] : labels) {
    check_writable_id(id);
    out << id << ',' << route_char(route) << '\n';
  }
  finish_write(out, "labels");
}

void write_label_csv(const LabelTable& labels, const std::string& path) {
  auto out = open_out(path);
  write_label_csv(labels, out);
}

LabelTable read_label_csv(std::istream& in) {
  LineReader reader(in);
  expect_header(reader, "vehicle_id,route_label");
  LabelTable labels;
  std::string line;
  while (reader.next(line)) {
    const std::size_t n = reader.number();
    const auto f = fields_of(line, 2, n);
    const auto id = id_field(f[0], n);
    if (!labels.emplace(std::string(id), route_field(f[1], n)).second) {
      bad_row(n, "duplicate vehicle_id '" + std::string(id) + "'");
    }
  }
  return labels;
}

LabelTable read_label_csv(const std::string& path) {
  auto in = open_in(path);
  return read_label_csv(in);
}

// ---------------------------------------------------------------------------
// FCD XML

FcdImport read_fcd_xml(std::string_view document, const LabelTable& labels) {
  using detail::XmlEvent;
  detail::XmlReader reader(document);
  FcdImport result;
  std::map<double, std::size_t> steps;
  std::set<std::string, std::less<>> skipped;
  std::size_t current_step = 0;
  bool in_timestep = false;

  const auto required = [](const XmlEvent& ev, std::string_view name) {
    const std::string* v = ev.attribute(name);
    if (!v) {
      throw ParseError("XML error at byte " + std::to_string(ev.offset) + ": <" +
                           ev.name + "> lacks required attribute '" +
                           std::string(name) + "'",
                       ev.offset);
    }
    return std::string_view(*v);
  };
  const auto number = [&](const XmlEvent& ev, std::string_view name) {
    const auto raw = required(ev, name);
    double v = 0.0;
    if (!text::parse_double(raw, v) || !std::isfinite(v)) {
      throw ParseError("XML error at byte " + std::to_string(ev.offset) +
                           ": attribute '" + std::string(name) +
                           "' is not a finite number",
                       ev.offset);
    }
    return v;
  };

  while (true) {
    XmlEvent ev = reader.next();
    if (ev.kind == XmlEvent::Kind::kEndOfDocument) break;
    if (ev.kind == XmlEvent::Kind::kEnd) {
      if (ev.name == "timestep") in_timestep = false;
      continue;
    }
    if (ev.name == "timestep") {
      const double time = number(ev, "time");
      current_step = steps.try_emplace(time, steps.size()).first->second;
      in_timestep = true;
    } else if (ev.name == "vehicle" && in_timestep) {
      const std::string id(required(ev, "id"));
      sim::TrajectoryPoint p;
      p.step = current_step;
      p.x = number(ev, "x");
      p.y = number(ev, "y");
      p.speed = number(ev, "speed");
      const auto label = labels.find(id);
      if (label == labels.end()) {
        skipped.insert(id);
        ++result.skipped_points;
        continue;
      }
      p.route = label->second;
      p.vehicle_id = id;
      result.trace.points.push_back(std::move(p));
    }
  }
  result.skipped_vehicles = skipped.size();
  std::stable_sort(result.trace.points.begin(), result.trace.points.end(),
                   sim::canonical_less);
  sim::validate_trace(result.trace);
  return result;
}

FcdImport read_fcd_xml_file(const std::string& path, const LabelTable& labels) {
  auto in = open_in(path);
  std::string doc{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("failed to read " + path);
  return read_fcd_xml(doc, labels);
}

// ---------------------------------------------------------------------------
// Dataset CSV

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  if (data.vehicle_ids.size() != data.examples.size()) {
    throw DataError("dataset vehicle ids and examples differ in length");
  }
  out << kDatasetHeader << '\n';
  for (std::size_t i = 0; i < data.examples.size(); ++i) {
    const auto& e = data.examples[i];
    if (e.features.size() != 2) {
      throw DataError("dataset CSV holds 2-D examples only");
    }
    check_writable_id(data.vehicle_ids[i]);
    out << data.vehicle_ids[i] << ',' << text::format_g17(e.features[0]) << ','
        << text::format_g17(e.features[1]) << ',' << route_char(to_route(e.label))
        << '\n';
  }
  finish_write(out, "dataset");
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  auto out = open_out(path);
  write_dataset_csv(data, out);
}

Dataset read_dataset_csv(std::istream& in) {
  LineReader reader(in);
  expect_header(reader, kDatasetHeader);
  Dataset data;
  data.provenance = Provenance::kImported;
  std::string line;
  while (reader.next(line)) {
    const std::size_t n = reader.number();
    const auto f = fields_of(line, 4, n);
    data.vehicle_ids.emplace_back(id_field(f[0], n));
    data.examples.push_back({{real_field(f[1], "x", n), real_field(f[2], "y", n)},
                             to_class_label(route_field(f[3], n))});
  }
  return data;
}

Dataset read_dataset_csv(const std::string& path) {
  auto in = open_in(path);
  return read_dataset_csv(in);
}

// ---------------------------------------------------------------------------
// Sampling

Dataset sample_examples(const sim::Trace& trace, std::size_t n,
                        std::uint64_t seed) {
  const VehicleTable table = index_vehicles(trace);
  require_vehicles(table.ids.size(), n);
  Rng shuffle_rng(derive_seed(seed, kShuffleStream));
  const auto order = shuffled(table.ids.size(), shuffle_rng);
  Rng step_rng(derive_seed(seed, kTrainStepStream));
  return draw(trace, table, std::span(order).first(n), step_rng, seed);
}

Split split_disjoint(const sim::Trace& trace, std::size_t n_train,
                     std::size_t n_test, std::uint64_t seed, SplitMode mode) {
  const VehicleTable table = index_vehicles(trace);
  const std::size_t count = table.ids.size();
  if (mode == SplitMode::kDisjoint) {
    require_vehicles(count, n_train + n_test);
  } else {
    require_vehicles(count, std::max(n_train, n_test));
  }
  Rng shuffle_rng(derive_seed(seed, kShuffleStream));
  const auto order = shuffled(count, shuffle_rng);

  Split split;
  Rng train_rng(derive_seed(seed, kTrainStepStream));
  split.train = draw(trace, table, std::span(order).first(n_train), train_rng, seed);

  Rng test_rng(derive_seed(seed, kTestStepStream));
  if (mode == SplitMode::kDisjoint) {
    split.test = draw(trace, table, std::span(order).subspan(n_train, n_test),
                      test_rng, seed);
  } else {
    Rng overlap_rng(derive_seed(seed, kOverlapShuffleStream));
    const auto other = shuffled(count, overlap_rng);
    split.test = draw(trace, table, std::span(other).first(n_test), test_rng, seed);
  }
  return split;
}

Dataset sample_test_set(const sim::Trace& trace, std::size_t n_train,
                        std::size_t n_test, std::uint64_t seed) {
  const VehicleTable table = index_vehicles(trace);
  require_vehicles(table.ids.size(), n_train + n_test);
  Rng shuffle_rng(derive_seed(seed, kShuffleStream));
  std::vector<std::size_t> pool = shuffled(table.ids.size(), shuffle_rng);
  pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_train));

  Rng rng(derive_seed(derive_seed(seed, kTestSetStream), n_test));
  for (std::size_t k = 0; k < n_test; ++k) {
    std::swap(pool[k], pool[k + rng.below(pool.size() - k)]);
  }
  return draw(trace, table, std::span(pool).first(n_test), rng, seed);
}

}  // namespace routepred::io
