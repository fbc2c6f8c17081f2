#pragma once

// Writes a trace in the SUMO fcd-export layout, for round-trip tests of the
// importer. Step k is written as time = time0 + k * dt so the importer has
// to renumber.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "routepred/traffic_sim.hpp"

namespace fcd_export {

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_fcd_xml(const routepred::sim::Trace& trace, double time0 = 0.0,
                              double dt = 1.0) {
  std::map<std::size_t, std::vector<const routepred::sim::TrajectoryPoint*>> by_step;
  for (const auto& p : trace.points) by_step[p.step].push_back(&p);
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<!-- generated by the test helper -->\n";
  s += "<fcd-export xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\">\n";
  for (const auto& [step, pts] : by_step) {
    char t[40];
    std::snprintf(t, sizeof t, "%.2f", time0 + dt * static_cast<double>(step));
    s += "  <timestep time=\"" + std::string(t) + "\">\n";
    for (const auto* p : pts) {
      s += "    <vehicle id=\"" + p->vehicle_id + "\" x=\"" + g17(p->x) + "\" y=\"" +
           g17(p->y) + "\" angle=\"90.00\" type=\"DEFAULT_VEHTYPE\" speed=\"" +
           g17(p->speed) + "\" pos=\"0.00\" lane=\"e0_0\" slope=\"0.00\"/>\n";
    }
    s += "  </timestep>\n";
  }
  s += "</fcd-export>\n";
  return s;
}

}  // namespace fcd_export
