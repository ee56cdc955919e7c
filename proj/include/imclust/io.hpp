#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "imclust/errors.hpp"

namespace imclust {

inline std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw input_error("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof())
        throw input_error("error reading file: " + path.string());
    return std::move(buf).str();
}

// Atomic write: the file appears under its final name only when complete.
inline void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw input_error("cannot open file for writing: " + tmp.string());
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out)
            throw input_error("error writing file: " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace imclust
