#include "sketch3d_app/config.hpp"

#include "sketch3d/error.hpp"
#include "sketch3d/text_util.hpp"

namespace sketch3d::app {

std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t line_no = 0;
    for (std::string_view raw : detail::split_lines(text)) {
        ++line_no;
        const std::string_view line = detail::trim(detail::strip_comment(raw, '#'));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("config: expected 'key = value'", line_no);
        std::string_view key = detail::trim(line.substr(0, eq));
        while (!key.empty() && key.front() == '-') key.remove_prefix(1);
        std::string_view value = detail::trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw ParseError("config: empty key", line_no);
        out.emplace_back(key, value);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> load_config(const std::filesystem::path& path) {
    return parse_config(detail::read_file(path));
}

}  // namespace sketch3d::app
