#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace irkit::detail {

std::string sha256_hex(std::string_view data);

std::string read_file(const std::string& path);
// Writes to "<path>.tmp.<pid>" and renames over path.
void write_file_atomic(const std::string& path, std::string_view content);

std::string fixed(double value, int decimals);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split_ws(std::string_view line);

// Strict unsigned parse of the whole string.
bool parse_size(std::string_view s, std::size_t& out);
bool parse_double(std::string_view s, double& out);

}  // namespace irkit::detail
