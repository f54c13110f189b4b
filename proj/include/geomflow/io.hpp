#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geomflow/grid.hpp"
#include "geomflow/levelsets.hpp"

namespace geomflow {

// Snapshot file: one JSON header line, then row-major 64-bit IEEE-754
// little-endian values. Round-trips bitwise.
void write_snapshot(const ScalarField& f, const std::string& path);
ScalarField read_snapshot(const std::string& path);

void write_contour_csv(const Contour& c, const std::string& path);
std::string contour_to_json(const Contour& c);
void write_contour_json(const Contour& c, const std::string& path);

// Two-column CSV with a header row.
void write_timeseries_csv(const std::vector<std::pair<double, double>>& series,
                          const std::string& x_name, const std::string& y_name,
                          const std::string& path);

}  // namespace geomflow
