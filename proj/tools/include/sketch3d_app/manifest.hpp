#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sketch3d::app {

inline constexpr int kSchemaVersion = 1;

struct ManifestEntry {
    std::string shape_id;
    std::filesystem::path mesh_path;                  ///< resolved against the manifest root
    std::optional<std::filesystem::path> sketch_path;
    std::string category;
};

/// JSON manifest:
///   {"schema_version": 1, "root": "data", "entries": [
///      {"shape_id": "...", "mesh_path": "...", "sketch_path": "...", "category": "..."}]}
/// A relative root is taken relative to the manifest file. Shape ids must be
/// unique. Paths are resolved here; whether a file exists is checked by the
/// command that opens it so one bad entry does not sink a batch.
struct DatasetManifest {
    std::filesystem::path root;
    std::vector<ManifestEntry> entries;

    const ManifestEntry* find(const std::string& shape_id) const;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir);

/// Reads one shape id per line; blank lines and '#' comments are skipped.
std::vector<std::string> load_shape_list(const std::filesystem::path& path);

/// Shape id made safe for use as a file name.
std::string file_stem_for(const std::string& shape_id);

}  // namespace sketch3d::app
