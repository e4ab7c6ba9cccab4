#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sketch3d::app {

/// Flat "key = value" config file; '#' starts a comment. Keys are flag
/// names without the leading dashes.
std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text);
std::vector<std::pair<std::string, std::string>> load_config(const std::filesystem::path& path);

}  // namespace sketch3d::app
