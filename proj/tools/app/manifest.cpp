#include "sketch3d_app/manifest.hpp"

#include <set>

#include <json.hpp>

#include "sketch3d/error.hpp"
#include "sketch3d/text_util.hpp"

namespace sketch3d::app {

using nlohmann::json;

const ManifestEntry* DatasetManifest::find(const std::string& shape_id) const {
    for (const auto& e : entries)
        if (e.shape_id == shape_id) return &e;
    return nullptr;
}

DatasetManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
        throw ParseError("manifest must be an object with an 'entries' array");
    if (doc.contains("schema_version") && doc["schema_version"] != kSchemaVersion)
        throw ParseError("unsupported manifest schema_version " + doc["schema_version"].dump());

    DatasetManifest m;
    const std::filesystem::path root = doc.value("root", std::string("."));
    m.root = root.is_absolute() ? root : base_dir / root;
    std::set<std::string> seen;
    for (const json& e : doc["entries"]) {
        if (!e.is_object() || !e.contains("shape_id") || !e["shape_id"].is_string())
            throw ParseError("manifest entry without a string shape_id");
        ManifestEntry entry;
        entry.shape_id = e["shape_id"].get<std::string>();
        if (entry.shape_id.empty()) throw ParseError("empty shape_id in manifest");
        if (!seen.insert(entry.shape_id).second) throw ParseError("duplicate shape_id '" + entry.shape_id + "'");
        auto resolve = [&](const std::string& p) {
            const std::filesystem::path path(p);
            return (path.is_absolute() ? path : m.root / path).lexically_normal();
        };
        if (e.contains("mesh_path") && e["mesh_path"].is_string())
            entry.mesh_path = resolve(e["mesh_path"].get<std::string>());
        if (e.contains("sketch_path") && e["sketch_path"].is_string())
            entry.sketch_path = resolve(e["sketch_path"].get<std::string>());
        entry.category = e.value("category", std::string("uncategorized"));
        m.entries.push_back(std::move(entry));
    }
    return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    return parse_manifest(detail::read_file(path), path.parent_path());
}

std::vector<std::string> load_shape_list(const std::filesystem::path& path) {
    std::vector<std::string> ids;
    std::set<std::string> seen;
    const std::string text = detail::read_file(path);
    for (std::string_view line : detail::split_lines(text)) {
        const std::string_view id = detail::trim(detail::strip_comment(line, '#'));
        if (id.empty()) continue;
        if (!seen.insert(std::string(id)).second) throw ParseError("duplicate shape id '" + std::string(id) + "'");
        ids.emplace_back(id);
    }
    return ids;
}

std::string file_stem_for(const std::string& shape_id) {
    std::string out = shape_id;
    for (char& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        if (!ok) c = '_';
    }
    if (out == "." || out == "..") out = "_";
    return out;
}

}  // namespace sketch3d::app
