#pragma once

// CSV artifacts. Numbers use 17 significant digits ("%.17g"), lines end in
// LF, and lines starting with '#' are comments that precede the header.
//
//   surface : x,xi,value        rows ordered by x, then xi
//   slice   : xi,value          preceded by "# probe_x=<snapped x>"
//   moments : x,mean,stddev
//   snapshot: x,<component names>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scuq/core_types.hpp"

namespace scuq {

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    std::vector<std::string> comments;  // without the leading '#'
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    friend bool operator==(const CsvTable&, const CsvTable&) = default;
};

inline void append_number(std::string& out, double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, static_cast<std::size_t>(n));
}

inline std::string format_csv(const CsvTable& t) {
    std::string out;
    out.reserve(64 + t.rows.size() * t.header.size() * 24);
    for (const auto& c : t.comments) {
        out += '#';
        out += c;
        out += '\n';
    }
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ',';
        out += t.header[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw CsvError("csv: row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            append_number(out, row[i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_csv(const std::string& path, const CsvTable& t) {
    const std::string text = format_csv(t);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw CsvError("csv: cannot open '" + path + "' for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw CsvError("csv: write failed for '" + path + "'");
}

inline CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header && !line.empty() && line.front() == '#') {
            t.comments.push_back(line.substr(1));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (line.empty()) continue;
        if (cells.size() != t.header.size()) {
            throw CsvError("csv: line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                           " fields, expected " + std::to_string(t.header.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(c, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != c.size()) {
                throw CsvError("csv: line " + std::to_string(line_no) + ": bad number '" + c + "'");
            }
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw CsvError("csv: missing header");
    return t;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CsvError("csv: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

// Table builders ------------------------------------------------------------

inline CsvTable surface_table(const std::vector<double>& x, const std::vector<double>& xi,
                              const std::vector<double>& values) {
    if (values.size() != x.size() * xi.size()) throw CsvError("csv: surface payload has the wrong size");
    CsvTable t{{}, {"x", "xi", "value"}, {}};
    t.rows.reserve(values.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t q = 0; q < xi.size(); ++q) t.rows.push_back({x[i], xi[q], values[i * xi.size() + q]});
    }
    return t;
}

inline CsvTable slice_table(double probe_x, const std::vector<double>& xi, const std::vector<double>& values) {
    if (values.size() != xi.size()) throw CsvError("csv: slice payload has the wrong size");
    std::string probe = "probe_x=";
    append_number(probe, probe_x);
    CsvTable t{{probe}, {"xi", "value"}, {}};
    for (std::size_t q = 0; q < xi.size(); ++q) t.rows.push_back({xi[q], values[q]});
    return t;
}

inline CsvTable moments_table(const std::vector<double>& x, const std::vector<double>& mean,
                              const std::vector<double>& stddev) {
    if (mean.size() != x.size() || stddev.size() != x.size()) {
        throw CsvError("csv: moments payload has the wrong size");
    }
    CsvTable t{{}, {"x", "mean", "stddev"}, {}};
    for (std::size_t i = 0; i < x.size(); ++i) t.rows.push_back({x[i], mean[i], stddev[i]});
    return t;
}

inline CsvTable snapshot_table(const StateField& u, const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != u.components()) throw CsvError("csv: component name count mismatch");
    CsvTable t;
    t.header.push_back("x");
    t.header.insert(t.header.end(), names.begin(), names.end());
    for (int j = 0; j < u.grid().n_cells(); ++j) {
        std::vector<double> row{u.grid().center(j)};
        for (int k = 0; k < u.components(); ++k) row.push_back(u(j, k));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline std::vector<double> cell_centers(const Grid1D& g, int stride = 1) {
    std::vector<double> x;
    for (int j = 0; j < g.n_cells(); j += std::max(stride, 1)) x.push_back(g.center(j));
    return x;
}

}  // namespace scuq
