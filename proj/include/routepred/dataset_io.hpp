#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "routepred/svm.hpp"
#include "routepred/traffic_sim.hpp"

namespace routepred::io {

/// The one place route labels become class labels: mainline (route 0) is
/// +1, off-ramp (route 1) is -1.
svm::ClassLabel to_class_label(sim::Route route);
sim::Route to_route(svm::ClassLabel label);

enum class Provenance { kGenerated, kImported };

struct Dataset {
  std::vector<svm::LabeledExample> examples;
  std::vector<std::string> vehicle_ids;  // source vehicle of each example
  Provenance provenance = Provenance::kGenerated;
  std::uint64_t seed = 0;
};

using LabelTable = std::map<std::string, sim::Route, std::less<>>;

LabelTable labels_from_trace(const sim::Trace& trace);

// ---------------------------------------------------------------------------
// Trace CSV: header `step,vehicle_id,x,y,speed,route_label`, LF line endings,
// reals with 17 significant digits, rows in canonical (step, vehicle_id)
// order. Vehicle ids must not contain commas, quotes or line breaks.

inline constexpr std::string_view kTraceHeader =
    "step,vehicle_id,x,y,speed,route_label";

void write_trace_csv(const sim::Trace& trace, std::ostream& out);
void write_trace_csv(const sim::Trace& trace, const std::string& path);

/// Parse errors carry the 1-based line number. The returned trace has no
/// config and is sorted into canonical order.
sim::Trace read_trace_csv(std::istream& in);
sim::Trace read_trace_csv(const std::string& path);

// ---------------------------------------------------------------------------
// Label sidecar CSV: header `vehicle_id,route_label`.

void write_label_csv(const LabelTable& labels, std::ostream& out);
void write_label_csv(const LabelTable& labels, const std::string& path);
LabelTable read_label_csv(std::istream& in);
LabelTable read_label_csv(const std::string& path);

// ---------------------------------------------------------------------------
// SUMO floating-car-data export subset:
//
//   <fcd-export>
//     <timestep time="0.00">
//       <vehicle id="veh0" x="1.0" y="2.0" speed="3.0" .../>
//     </timestep>
//   </fcd-export>
//
// Distinct `time` values become steps 0, 1, 2, ... in order of first
// appearance. Other elements and attributes are ignored.

struct FcdImport {
  sim::Trace trace;
  std::size_t skipped_vehicles = 0;  // ids absent from the label table
  std::size_t skipped_points = 0;
};

/// XML syntax errors and missing required attributes raise ParseError with
/// the byte offset into `document`.
FcdImport read_fcd_xml(std::string_view document, const LabelTable& labels);
FcdImport read_fcd_xml_file(const std::string& path, const LabelTable& labels);

// ---------------------------------------------------------------------------
// Dataset CSV: header `vehicle_id,x,y,route_label` (route labels 0/1, mapped
// to classes by to_class_label on read).

inline constexpr std::string_view kDatasetHeader = "vehicle_id,x,y,route_label";

void write_dataset_csv(const Dataset& data, std::ostream& out);
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);

// ---------------------------------------------------------------------------
// Seeded sampling. One example is the (x, y) position of one vehicle at one
// uniformly drawn step of its trajectory. All draws use routepred::Rng, so
// results are identical across platforms for equal (trace, sizes, seed).
//
// Vehicles are ordered by id and shuffled once per seed; the first n of that
// shuffle form the training vehicles of sample_examples, split_disjoint and
// sample_test_set alike, so the three agree on which vehicles are "train".

/// n distinct vehicles, one example each. DataError when the trace has
/// fewer than n vehicles.
Dataset sample_examples(const sim::Trace& trace, std::size_t n,
                        std::uint64_t seed);

enum class SplitMode {
  kDisjoint,     // test vehicles never appear in the training set
  kOverlapping,  // test vehicles drawn from all vehicles
};

struct Split {
  Dataset train;
  Dataset test;
};

/// Train set equals sample_examples(trace, n_train, seed). In disjoint mode
/// the test set takes the next n_test vehicles of the same shuffle.
Split split_disjoint(const sim::Trace& trace, std::size_t n_train,
                     std::size_t n_test, std::uint64_t seed,
                     SplitMode mode = SplitMode::kDisjoint);

/// A test set of n_test vehicles drawn from those outside the n_train
/// training vehicles, on a sub-stream keyed by n_test. Sets of different
/// sizes are independent draws (they may share vehicles with each other,
/// never with the training set).
Dataset sample_test_set(const sim::Trace& trace, std::size_t n_train,
                        std::size_t n_test, std::uint64_t seed);

}  // namespace routepred::io
