// io.hpp - sampled-pulse CSV files and small text formats used by the CLI

#pragma once

#include "photonsim/errors.hpp"
#include "photonsim/model.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace photonsim::io {

// %.17g round-trips every finite double.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Whole-token parse; rejects trailing garbage, "nan" and "inf".
inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

// "min:max:n"
inline FrequencyGrid parse_grid(std::string_view text) {
    const auto parts = split(text, ':');
    double lo = 0.0, hi = 0.0, n = 0.0;
    if (parts.size() != 3 || !parse_double(parts[0], lo) || !parse_double(parts[1], hi) ||
        !parse_double(parts[2], n) || n != std::floor(n) || n < 0.0 || n > 1e8) {
        throw ParseError("grid must look like min:max:n with an integer n, got '" + std::string(text) + "'");
    }
    return FrequencyGrid(lo, hi, static_cast<std::size_t>(n));
}

inline std::string format_grid(const FrequencyGrid& g) {
    return format_double(g.min()) + ":" + format_double(g.max()) + ":" + std::to_string(g.size());
}

// "0.5,1,2"
inline std::vector<double> parse_double_list(std::string_view s) {
    std::vector<double> out;
    for (auto part : split(s, ',')) {
        double v = 0.0;
        if (!parse_double(part, v)) {
            throw ParseError("expected a comma-separated list of numbers, got '" + std::string(s) + "'");
        }
        out.push_back(v);
    }
    return out;
}

// --------------------------------------------------------------------------
// Sampled-pulse CSV: header "nu,re,im", one sample per line.
// --------------------------------------------------------------------------

inline PulseSpec read_sampled_pulse(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<double> nodes;
    std::vector<cplx> values;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        if (!header) {
            if (row != "nu,re,im") {
                throw ParseError(source + ":" + std::to_string(lineno) + ": expected header 'nu,re,im'");
            }
            header = true;
            continue;
        }
        const auto f = split(row, ',');
        double nu = 0.0, re = 0.0, im = 0.0;
        if (f.size() != 3 || !parse_double(f[0], nu) || !parse_double(f[1], re) || !parse_double(f[2], im)) {
            throw ParseError(source + ":" + std::to_string(lineno) + ": malformed row '" + std::string(row) + "'");
        }
        nodes.push_back(nu);
        values.emplace_back(re, im);
    }
    if (!header) throw ParseError(source + ": empty file (expected header 'nu,re,im')");
    if (nodes.size() < 3) {
        throw ParseError(source + ": need at least 3 samples, found " + std::to_string(nodes.size()));
    }
    return PulseSpec::sampled(std::move(nodes), std::move(values));
}

inline PulseSpec load_sampled_pulse(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open pulse file '" + path + "'");
    return read_sampled_pulse(in, path);
}

inline void write_sampled_pulse(std::ostream& out, const SampledPulse& pulse) {
    out << "nu,re,im\n";
    for (std::size_t k = 0; k < pulse.nodes().size(); ++k) {
        const cplx v = pulse.values()[k];
        out << format_double(pulse.nodes()[k]) << ',' << format_double(v.real()) << ',' << format_double(v.imag())
            << '\n';
    }
}

inline void save_sampled_pulse(const std::string& path, const SampledPulse& pulse) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    write_sampled_pulse(out, pulse);
    if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace photonsim::io
