#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace enose {

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Fixed number of decimals, for plots and human-facing reports.
std::string format_fixed(double value, int decimals);

double parse_double(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace enose
