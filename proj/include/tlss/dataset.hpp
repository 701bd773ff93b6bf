#pragma once

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tlss/errors.hpp"
#include "tlss/models.hpp"

namespace tlss {

/// A parsed dataset: header "value" or "value,censored", one observation per row.
struct DatasetFile {
    std::filesystem::path path;
    std::string name;
    std::vector<Observation> rows;

    std::size_t censored_count() const {
        std::size_t c = 0;
        for (const auto& r : rows) c += r.censored ? 1 : 0;
        return c;
    }
};

inline constexpr const char* kDataDirVariable = "TLSS_DATA_DIR";

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline double parse_double(std::string_view field, int line) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc() || ptr != last) {
        throw DataError("line " + std::to_string(line) + ": '" + std::string(field) + "' is not a number", line);
    }
    if (!std::isfinite(value)) {
        throw DataError("line " + std::to_string(line) + ": value must be finite", line);
    }
    return value;
}

} // namespace detail

/// Parses dataset text. Line numbers in errors are 1-based and count the header.
inline DatasetFile parse_dataset_text(std::string_view text, std::string name = "dataset") {
    DatasetFile file;
    file.name = std::move(name);
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    int line_number = 0;
    bool header_seen = false;
    bool has_censored = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_number;
        const std::string_view line = detail::trim(raw);
        if (line.empty()) continue;

        const auto fields = detail::split_fields(line);
        if (!header_seen) {
            if (fields.size() == 1 && fields[0] == "value") {
                has_censored = false;
            } else if (fields.size() == 2 && fields[0] == "value" && fields[1] == "censored") {
                has_censored = true;
            } else {
                throw DataError("line " + std::to_string(line_number) +
                                    ": expected header 'value' or 'value,censored'",
                                line_number);
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != (has_censored ? 2u : 1u)) {
            throw DataError("line " + std::to_string(line_number) + ": expected " +
                                std::to_string(has_censored ? 2 : 1) + " field(s), found " +
                                std::to_string(fields.size()),
                            line_number);
        }
        Observation obs;
        obs.value = detail::parse_double(fields[0], line_number);
        if (has_censored) {
            if (fields[1] == "0") {
                obs.censored = false;
            } else if (fields[1] == "1") {
                obs.censored = true;
            } else {
                throw DataError("line " + std::to_string(line_number) + ": censored flag must be 0 or 1, found '" +
                                    std::string(fields[1]) + "'",
                                line_number);
            }
        }
        file.rows.push_back(obs);
    }
    if (!header_seen) throw DataError("dataset is empty: missing header");
    if (file.rows.empty()) throw DataError("dataset has a header but no observations");
    return file;
}

/// Resolves a dataset path: used as given when it exists, otherwise looked up
/// inside the directory named by TLSS_DATA_DIR.
inline std::filesystem::path resolve_dataset_path(const std::filesystem::path& path) {
    if (std::filesystem::exists(path)) return path;
    if (path.is_relative()) {
        if (const char* dir = std::getenv(kDataDirVariable); dir && *dir) {
            const std::filesystem::path candidate = std::filesystem::path(dir) / path;
            if (std::filesystem::exists(candidate)) return candidate;
        }
    }
    throw DataError("dataset file not found: " + path.string());
}

inline DatasetFile parse_dataset(const std::filesystem::path& path) {
    const std::filesystem::path resolved = resolve_dataset_path(path);
    std::ifstream in(resolved, std::ios::binary);
    if (!in) throw DataError("cannot open dataset file: " + resolved.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    DatasetFile file = parse_dataset_text(buffer.str(), resolved.stem().string());
    file.path = resolved;
    return file;
}

/// Shortest text that parses back to exactly the same double.
inline std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) return std::to_string(value);
    return std::string(buf, ptr);
}

/// Dataset CSV text. The censored column is written when any row is censored
/// or when always_censored_column is set.
inline std::string format_dataset(const std::vector<Observation>& rows, bool always_censored_column = false) {
    bool censored_column = always_censored_column;
    for (const auto& r : rows) censored_column = censored_column || r.censored;
    std::string out = censored_column ? "value,censored\n" : "value\n";
    for (const auto& r : rows) {
        out += format_double(r.value);
        if (censored_column) out += r.censored ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

} // namespace tlss
