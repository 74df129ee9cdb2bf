#pragma once
#include <string>
#include <vector>

#include "nutaxis/monitors.hpp"

namespace nutaxis {

// Shortest round-trip decimal representation at 17 significant digits.
std::string fmt17(double x);

// Field snapshot file: "# nx ny lx ly t" then nx*ny values, one per line,
// row-major, full round-trip precision.
void write_snapshot(const std::string& path, const Field& f, double t);

struct Snapshot {
    Field field;
    double t = 0.0;
};
Snapshot read_snapshot(const std::string& path);

// Snapshot file names used by run outputs: u_<step:08d>.fld / v_<step:08d>.fld.
std::string snapshot_name(const char* prefix, long step);

void write_monitors_csv(const std::string& path, const MonitorConfig& cfg,
                        const std::vector<MonitorRecord>& series);

// Generic CSV table (gronwall/plot read arbitrary columns).
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows; // row-major
    std::size_t column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

// One line per bound: name verdict asserted observed margin.
void write_bound_report(const std::string& path, const BoundReport& rep);
BoundReport read_bound_report(const std::string& path);

std::string read_text_file(const std::string& path);

} // namespace nutaxis
