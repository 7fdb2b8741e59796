#pragma once

#include <string>

namespace sep {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Shortest decimal form that parses back to the same double (up to 17
/// significant digits). All persisted numbers go through this so files are
/// byte-stable and round trips are exact.
std::string g17(double value);

/// Fixed two decimals, the report-table convention.
std::string fixed2(double value);

std::string json_escape(const std::string& text);

}  // namespace sep
