#ifndef ZSLIAS_CSV_HPP
#define ZSLIAS_CSV_HPP

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace zslias {

// CSV without quoting: fields split on bare commas.
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

// Base-10 decimal with optional exponent; rejects trailing garbage.
inline double parse_decimal(const std::string& s, const std::string& where) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
    double value = 0.0;
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw std::runtime_error("invalid decimal '" + s + "' at " + where);
    return value;
}

// Shortest round-trip decimal text, stable across reruns.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shortest representation that parses back exactly.
    for (int prec = 1; prec < 17; ++prec) {
        char trial[40];
        std::snprintf(trial, sizeof(trial), "%.*g", prec, v);
        double back = 0.0;
        auto res = std::from_chars(trial, trial + std::string(trial).size(), back);
        if (res.ec == std::errc{} && back == v) return trial;
    }
    return buf;
}

inline bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-'))
            return false;
    }
    return true;
}

} // namespace zslias

#endif
