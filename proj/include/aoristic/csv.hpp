#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aoristic/chronology.hpp"
#include "aoristic/errors.hpp"
#include "aoristic/intensity.hpp"

namespace aoristic {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_real(const std::string& text, const std::string& file, std::size_t line,
                         const std::string& column) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw validation_error(file + ":" + std::to_string(line) + ": column '" + column +
                               "': cannot parse '" + text + "' as a real number");
    return value;
}

inline std::int64_t parse_year(const std::string& text, const std::string& file,
                               std::size_t line, const std::string& column) {
    std::int64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw validation_error(file + ":" + std::to_string(line) + ": column '" + column +
                               "': cannot parse '" + text + "' as an integer year");
    return value;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open '" + path + "' for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace detail

// Finds CSV: header `find_id,context_id,count,use_start,use_end`, UTF-8,
// one record per row. Context references are validated at analysis time,
// not here.
inline std::vector<FindRecord> load_finds(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty())
        throw validation_error(path + ": missing header row");
    std::vector<FindRecord> finds;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (lines[n].empty() || lines[n] == "\r") continue;
        const auto fields = detail::split_csv_line(lines[n]);
        if (fields.size() != 5)
            throw validation_error(path + ":" + std::to_string(n + 1) + ": expected 5 columns, got " +
                                   std::to_string(fields.size()));
        FindRecord f;
        f.find_id = fields[0];
        f.context_id = fields[1];
        f.count = detail::parse_real(fields[2], path, n + 1, "count");
        f.use_start = detail::parse_year(fields[3], path, n + 1, "use_start");
        f.use_end = detail::parse_year(fields[4], path, n + 1, "use_end");
        try {
            f.validate();
        } catch (const validation_error& e) {
            throw validation_error(path + ":" + std::to_string(n + 1) + ": " + e.what());
        }
        finds.push_back(std::move(f));
    }
    return finds;
}

// Contexts CSV: header `context_id,duration,staffing`; the staffing column may
// be empty, defaulting to 1.0. Context ids must be unique.
inline std::vector<ContextRecord> load_contexts(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty())
        throw validation_error(path + ": missing header row");
    std::vector<ContextRecord> contexts;
    std::set<std::string> seen;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (lines[n].empty() || lines[n] == "\r") continue;
        const auto fields = detail::split_csv_line(lines[n]);
        if (fields.size() != 2 && fields.size() != 3)
            throw validation_error(path + ":" + std::to_string(n + 1) +
                                   ": expected 2 or 3 columns, got " +
                                   std::to_string(fields.size()));
        ContextRecord c;
        c.context_id = fields[0];
        c.duration = detail::parse_real(fields[1], path, n + 1, "duration");
        c.staffing = (fields.size() == 3 && !fields[2].empty())
                         ? detail::parse_real(fields[2], path, n + 1, "staffing")
                         : 1.0;
        try {
            c.validate();
        } catch (const validation_error& e) {
            throw validation_error(path + ":" + std::to_string(n + 1) + ": " + e.what());
        }
        if (!seen.insert(c.context_id).second)
            throw validation_error(path + ":" + std::to_string(n + 1) +
                                   ": duplicate context id '" + c.context_id + "'");
        contexts.push_back(std::move(c));
    }
    return contexts;
}

} // namespace aoristic
