#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imclust/errors.hpp"

namespace imclust {

enum class Labeling { subdirs, wang_numeric };

inline std::string_view to_string(Labeling labeling) {
    return labeling == Labeling::subdirs ? "subdirs" : "wang_numeric";
}

inline Labeling parse_labeling(std::string_view name) {
    if (name == "subdirs")
        return Labeling::subdirs;
    if (name == "wang_numeric")
        return Labeling::wang_numeric;
    throw input_error("unknown labeling scheme: " + std::string(name));
}

// Class names of the 10-class benchmark corpus, in canonical row order;
// file <n>.<ext> belongs to class floor(n/100).
inline const std::array<std::string, 10>& wang_class_names() {
    static const std::array<std::string, 10> names = {
        "African People and villages",
        "Beaches",
        "Buildings",
        "Buses",
        "Dinosaurs",
        "Elephants",
        "Flowers",
        "Horses",
        "Mountains and glaciers",
        "Food",
    };
    return names;
}

struct ManifestEntry {
    std::string image_id;
    std::filesystem::path path;
    std::optional<std::string> label;

    bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
};

namespace detail {

inline bool has_image_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".ppm" || ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

inline std::string offender_list(const std::vector<std::string>& offenders) {
    std::string out;
    const std::size_t shown = std::min<std::size_t>(offenders.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
        if (i > 0)
            out += ", ";
        out += offenders[i];
    }
    if (offenders.size() > shown)
        out += ", ... (" + std::to_string(offenders.size() - shown) + " more)";
    return out;
}

}  // namespace detail

inline DatasetManifest ingest(const std::filesystem::path& root, Labeling labeling) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root))
        throw input_error("ingest: not a directory: " + root.string());

    DatasetManifest manifest;
    std::vector<std::string> offenders;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file() || !detail::has_image_extension(entry.path()))
            continue;
        const fs::path& path = entry.path();
        ManifestEntry m;
        m.path = path;
        if (labeling == Labeling::subdirs) {
            m.image_id = fs::relative(path, root).generic_string();
            if (path.parent_path() == root) {
                offenders.push_back(m.image_id);
                continue;
            }
            m.label = path.parent_path().filename().string();
        } else {
            m.image_id = path.filename().string();
            const std::string stem = path.stem().string();
            const bool digits = !stem.empty() &&
                                std::all_of(stem.begin(), stem.end(), [](unsigned char c) {
                                    return std::isdigit(c) != 0;
                                });
            const long n = digits && stem.size() <= 4 ? std::stol(stem) : -1;
            if (n < 0 || n > 999) {
                offenders.push_back(m.image_id);
                continue;
            }
            m.label = wang_class_names()[static_cast<std::size_t>(n / 100)];
        }
        manifest.entries.push_back(std::move(m));
    }

    if (!offenders.empty()) {
        std::sort(offenders.begin(), offenders.end());
        if (labeling == Labeling::subdirs)
            throw input_error("ingest: image files not inside a class subdirectory: " +
                              detail::offender_list(offenders));
        throw input_error("ingest: filenames not of the form <0-999>.<ext>: " +
                          detail::offender_list(offenders));
    }
    if (manifest.entries.empty())
        throw input_error("ingest: no image files under " + root.string());

    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) {
                  return a.image_id < b.image_id;
              });
    for (std::size_t i = 1; i < manifest.entries.size(); ++i)
        if (manifest.entries[i].image_id == manifest.entries[i - 1].image_id)
            throw input_error("ingest: duplicate image_id " + manifest.entries[i].image_id);
    return manifest;
}

}  // namespace imclust
