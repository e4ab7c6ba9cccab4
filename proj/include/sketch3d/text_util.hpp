#pragma once

// Small text and file helpers shared by the parsers and the CLI.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sketch3d::detail {

std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split_ws(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view s);
std::string_view strip_comment(std::string_view line, char marker);

/// Whole-token parses; return false on trailing garbage.
bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, long long& out);

/// Shortest representation that round-trips exactly.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

}  // namespace sketch3d::detail
