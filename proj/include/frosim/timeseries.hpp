#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace frosim {

/// Uniform-grid recording of a simulation run: a time vector plus named
/// columns of equal length.
struct TimeSeries {
    double h = 0.0;
    std::vector<std::string> names;            // column names, excluding time
    std::vector<double> time;
    std::vector<std::vector<double>> columns;  // columns[i][row]

    std::size_t rows() const { return time.size(); }

    const std::vector<double>& column(std::string_view name) const {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) return columns[i];
        }
        throw std::invalid_argument("time series has no column '" + std::string(name) +
                                    "'");
    }

    bool has_column(std::string_view name) const {
        for (const std::string& n : names) {
            if (n == name) return true;
        }
        return false;
    }
};

namespace detail {

/// Shortest decimal representation that round-trips to the same double.
inline void append_double(std::string& out, double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, p);
}

} // namespace detail

/// Plain CSV: one header line with column names, then one row per step.
/// Numbers use the shortest round-trip decimal form.
inline void write_csv(const TimeSeries& ts, std::ostream& out) {
    std::string line = "t";
    for (const std::string& n : ts.names) {
        line += ',';
        line += n;
    }
    line += '\n';
    out << line;
    for (std::size_t row = 0; row < ts.rows(); ++row) {
        line.clear();
        detail::append_double(line, ts.time[row]);
        for (const std::vector<double>& col : ts.columns) {
            line += ',';
            detail::append_double(line, col[row]);
        }
        line += '\n';
        out << line;
    }
}

inline void write_csv_file(const TimeSeries& ts, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(ts, out);
}

inline TimeSeries read_csv(std::istream& in) {
    TimeSeries ts;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trace file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::size_t pos = 0;
    bool first = true;
    while (pos <= line.size()) {
        const std::size_t comma = std::min(line.find(',', pos), line.size());
        const std::string name = line.substr(pos, comma - pos);
        if (first) {
            if (name != "t") throw std::runtime_error("trace header must start with 't'");
            first = false;
        } else {
            ts.names.push_back(name);
        }
        pos = comma + 1;
    }
    ts.columns.resize(ts.names.size());

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        std::size_t col = 0;
        while (true) {
            double v = 0.0;
            auto [q, ec] = std::from_chars(p, end, v);
            if (ec != std::errc{}) throw std::runtime_error("bad number in trace row");
            if (col == 0) {
                ts.time.push_back(v);
            } else {
                if (col - 1 >= ts.columns.size()) {
                    throw std::runtime_error("trace row has too many fields");
                }
                ts.columns[col - 1].push_back(v);
            }
            ++col;
            if (q == end) break;
            if (*q != ',') throw std::runtime_error("expected ',' in trace row");
            p = q + 1;
        }
        if (col != ts.names.size() + 1) {
            throw std::runtime_error("trace row has wrong field count");
        }
    }

    if (ts.time.size() >= 2) ts.h = ts.time[1] - ts.time[0];
    return ts;
}

inline TimeSeries read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
    return read_csv(in);
}

} // namespace frosim
