#pragma once

// Internal helpers shared by the readers and writers.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "hybrid/error.hpp"

namespace hybrid::detail {

inline std::ifstream open_input(const std::filesystem::path& path,
                                std::ios::openmode mode = std::ios::in)
{
    std::ifstream in(path, mode);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

inline std::ofstream open_output(const std::filesystem::path& path,
                                 std::ios::openmode mode = std::ios::out)
{
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

inline std::string location(std::string_view source, std::size_t line)
{
    return std::string(source) + ":" + std::to_string(line);
}

inline bool is_blank(std::string_view line)
{
    return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

/// Splits on runs of ASCII whitespace.
inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        auto start = line.find_first_not_of(" \t\r\n", pos);
        if (start == std::string_view::npos) {
            break;
        }
        auto stop = line.find_first_of(" \t\r\n", start);
        if (stop == std::string_view::npos) {
            stop = line.size();
        }
        fields.push_back(line.substr(start, stop - start));
        pos = stop;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& value)
{
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last;
}

}  // namespace hybrid::detail
