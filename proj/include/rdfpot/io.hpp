#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rdfpot/errors.hpp"
#include "rdfpot/grid.hpp"

namespace rdfpot {

/// Raw two-column table: radii (strictly increasing) and values.
struct TableData {
    std::vector<double> r;
    std::vector<double> v;
};

/// Parse whitespace-separated two-column text. Lines starting with '#' and
/// blank lines are skipped; anything else must be exactly two numbers.
inline TableData read_table(std::istream& in, const std::string& name = "<stream>") {
    TableData out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream is(line.substr(first));
        double r = 0.0, v = 0.0;
        std::string extra;
        if (!(is >> r >> v) || (is >> extra))
            throw ParseError(name + ": expected two numbers per line", lineno);
        if (!std::isfinite(r) || !std::isfinite(v))
            throw ParseError(name + ": non-finite entry", lineno);
        if (!out.r.empty() && r <= out.r.back())
            throw ParseError(name + ": radii must be strictly increasing", lineno);
        out.r.push_back(r);
        out.v.push_back(v);
    }
    return out;
}

inline TableData read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open table file: " + path.string());
    return read_table(in, path.filename().string());
}

inline void write_table(std::ostream& out, const std::vector<double>& r,
                        const std::vector<double>& v, const std::string& header = "") {
    if (!header.empty()) out << "# " << header << "\n";
    char buf[80];
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", r[i], v[i]);
        out << buf;
    }
}

inline void write_table(const std::filesystem::path& path, const std::vector<double>& r,
                        const std::vector<double>& v, const std::string& header = "") {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write table file: " + path.string());
    write_table(out, r, v, header);
}

inline std::vector<double> grid_radii(const RadialGrid& g, std::size_t count) {
    std::vector<double> r(count);
    for (std::size_t i = 0; i < count; ++i) r[i] = g.r_at(i);
    return r;
}

inline void write_tabulated(const std::filesystem::path& path, const Tabulated& t,
                            const std::string& header = "") {
    write_table(path, grid_radii(t.grid, t.values.size()), t.values, header);
}

/// Interpret raw table data as samples on an equidistant grid r_j = j*dr.
/// The spacing is inferred from the first radius and checked on every node.
inline Tabulated to_tabulated(const TableData& data, Kind kind) {
    if (data.r.empty()) throw ConfigError("table is empty");
    const double dr = data.r.front();
    if (!(dr > 0.0)) throw ConfigError("table radii must be positive");
    const int m = static_cast<int>(data.r.size());
    for (int j = 1; j <= m; ++j) {
        const double expect = dr * static_cast<double>(j);
        if (std::abs(data.r[static_cast<std::size_t>(j - 1)] - expect) > 1e-6 * dr)
            throw ConfigError("table radii are not equidistant multiples of the first radius");
    }
    if (kind == Kind::rdf)
        for (double v : data.v)
            if (v < 0.0) throw ConfigError("rdf table holds negative values");
    return Tabulated{RadialGrid{dr, m, m}, data.v, kind};
}

/// Load a table and bind it to a declared grid, checking consistency.
inline Tabulated load_on_grid(const std::filesystem::path& path, const RadialGrid& grid,
                              Kind kind) {
    Tabulated t = to_tabulated(read_table(path), kind);
    const int expected = (kind == Kind::potential) ? grid.n : grid.m;
    if (static_cast<int>(t.values.size()) != expected)
        throw ConfigError(path.string() + ": expected " + std::to_string(expected) +
                          " rows for this grid, found " + std::to_string(t.values.size()));
    if (std::abs(t.grid.dr - grid.dr) > 1e-9 * grid.dr)
        throw ConfigError(path.string() + ": table spacing does not match the configured grid");
    t.grid = grid;
    return t;
}

} // namespace rdfpot
