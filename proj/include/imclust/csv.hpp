#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "imclust/errors.hpp"

// Minimal RFC-4180-style CSV helpers plus number formatting. Doubles are
// written in their shortest round-trip form so read(write(x)) == x.

namespace imclust {
namespace csv {

inline std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    out.push_back('"');
    return out;
}

struct Record {
    std::vector<std::string> fields;
    std::size_t line_no = 0;  // 1-based line the record starts on

    bool operator==(const Record&) const = default;
};

// Parses a whole CSV text into records. Quoted fields may hold commas,
// doubled quotes, and line breaks; a record ends at an unquoted newline.
inline std::vector<Record> split_records(std::string_view text) {
    std::vector<Record> records;
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        Record rec;
        rec.line_no = line;
        std::string current;
        bool quoted = false;
        bool done = false;
        while (i < text.size() && !done) {
            const char c = text[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        current.push_back('"');
                        i += 2;
                    } else {
                        quoted = false;
                        ++i;
                    }
                } else {
                    if (c == '\n')
                        ++line;
                    current.push_back(c);
                    ++i;
                }
            } else if (c == '"') {
                if (!current.empty())
                    throw input_error("line " + std::to_string(line) +
                                      ": stray quote inside unquoted field");
                quoted = true;
                ++i;
            } else if (c == ',') {
                rec.fields.push_back(std::move(current));
                current.clear();
                ++i;
            } else if (c == '\n') {
                ++line;
                ++i;
                done = true;
            } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
                ++line;
                i += 2;
                done = true;
            } else {
                current.push_back(c);
                ++i;
            }
        }
        if (quoted)
            throw input_error("line " + std::to_string(rec.line_no) +
                              ": unterminated quoted field");
        rec.fields.push_back(std::move(current));
        records.push_back(std::move(rec));
    }
    return records;
}

// Splits on '\n', tolerating a trailing '\r' per line and a trailing newline.
inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (end == text.size() && line.empty())
            break;
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::size_t line_no) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw input_error("line " + std::to_string(line_no) + ": bad numeric value '" +
                          std::string(text) + "'");
    return value;
}

inline long parse_long(std::string_view text, std::size_t line_no) {
    long value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw input_error("line " + std::to_string(line_no) + ": bad integer '" +
                          std::string(text) + "'");
    return value;
}

// Two-decimal fixed formatting, e.g. 97.0588 -> "97.06".
inline std::string format_percent(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return std::string(buf);
}

}  // namespace csv
}  // namespace imclust
