#pragma once
#include <string>
#include <vector>

namespace nutaxis {

// Self-contained SVG line chart (paths + axis ticks + legend), no external
// renderer. One polyline per series; series are drawn against the shared xs.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<double>& xs,
                      const std::vector<std::vector<double>>& series,
                      const std::vector<std::string>& labels);

} // namespace nutaxis
