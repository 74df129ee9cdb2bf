#include "nutaxis/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nutaxis {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_snapshot(const std::string& path, const Field& f, double t) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("write_snapshot: cannot open " + path);
    const Grid2D& g = f.grid;
    os << "# " << g.nx << ' ' << g.ny << ' ' << fmt17(g.lx) << ' ' << fmt17(g.ly)
       << ' ' << fmt17(t) << '\n';
    for (double v : f.values) os << fmt17(v) << '\n';
    if (!os)
        throw ConfigError("write_snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("read_snapshot: cannot open " + path);
    std::string hash;
    int nx = 0, ny = 0;
    double lx = 0, ly = 0, t = 0;
    is >> hash >> nx >> ny >> lx >> ly >> t;
    if (!is || hash != "#")
        throw ConfigError("read_snapshot: malformed header in " + path);
    Snapshot snap;
    snap.t = t;
    snap.field = Field(Grid2D(nx, ny, lx, ly));
    for (double& v : snap.field.values)
        if (!(is >> v))
            throw ConfigError("read_snapshot: truncated data in " + path);
    return snap;
}

std::string snapshot_name(const char* prefix, long step) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%08ld.fld", prefix, step);
    return buf;
}

void write_monitors_csv(const std::string& path, const MonitorConfig& cfg,
                        const std::vector<MonitorRecord>& series) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("write_monitors_csv: cannot open " + path);
    const std::vector<std::string> cols = monitor_columns(cfg);
    for (std::size_t k = 0; k < cols.size(); ++k)
        os << cols[k] << (k + 1 < cols.size() ? ',' : '\n');
    for (const MonitorRecord& r : series)
        for (std::size_t k = 0; k < cols.size(); ++k)
            os << fmt17(record_field(r, cfg, cols[k])) << (k + 1 < cols.size() ? ',' : '\n');
    if (!os)
        throw ConfigError("write_monitors_csv: write failed for " + path);
}

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t k = 0; k < columns.size(); ++k)
        if (columns[k] == name) return k;
    throw RangeError("csv: no column named '" + name + "'");
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const std::size_t k = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[k]);
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("read_csv: cannot open " + path);
    CsvTable tab;
    std::string line;
    if (!std::getline(is, line))
        throw ConfigError("read_csv: empty file " + path);
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) tab.columns.push_back(cell);
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != tab.columns.size())
            throw ConfigError("read_csv: ragged row in " + path);
        tab.rows.push_back(std::move(row));
    }
    return tab;
}

void write_bound_report(const std::string& path, const BoundReport& rep) {
    std::ofstream os(path);
    if (!os)
        throw ConfigError("write_bound_report: cannot open " + path);
    for (const BoundEntry& e : rep.entries)
        os << e.name << ' ' << e.verdict << ' ' << fmt17(e.asserted) << ' '
           << fmt17(e.observed) << ' ' << fmt17(e.margin) << '\n';
    if (!os)
        throw ConfigError("write_bound_report: write failed for " + path);
}

BoundReport read_bound_report(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("read_bound_report: cannot open " + path);
    BoundReport rep;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        BoundEntry e;
        if (!(ss >> e.name >> e.verdict >> e.asserted >> e.observed >> e.margin))
            throw ConfigError("read_bound_report: malformed line in " + path + ": " + line);
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace nutaxis
