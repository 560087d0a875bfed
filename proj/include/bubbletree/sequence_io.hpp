#pragma once

#include <iosfwd>
#include <string>

#include "bubbletree/metric_grid.hpp"

namespace bubbletree {

// Plain-text frame file:
//   BTSEQ 1
//   chart <kind> <cx> <cy> <outer> <inner> <grid_n>
//   frames <count>
//   frame <label>            then grid_n rows of grid_n values, or VANISHED
// Reals are written with 17 significant digits so reading is bit-exact.
void write_sequence(std::ostream& out, const MetricSequence& seq);
MetricSequence read_sequence(std::istream& in);

void save_sequence(const std::string& path, const MetricSequence& seq);
MetricSequence load_sequence(const std::string& path);

std::string format_real(double v);

}  // namespace bubbletree
