#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "imclust/errors.hpp"
#include "imclust/image.hpp"
#include "imclust/io.hpp"

// Netpbm PPM (P3 ASCII / P6 binary) reader and writer, maxval 255 only.
// This is the bit-exact interchange format; everything else goes through
// a codec (see image_io.hpp).

namespace imclust {

namespace detail {

class PpmCursor {
public:
    explicit PpmCursor(std::string_view bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }
    bool at_end() const { return pos_ >= bytes_.size(); }

    char peek() const { return bytes_[pos_]; }
    char take() { return bytes_[pos_++]; }

    static bool is_space(char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
    }

    // Skips whitespace and '#' comments. Returns how many characters were consumed.
    std::size_t skip_separators() {
        std::size_t start = pos_;
        while (!at_end()) {
            if (is_space(peek())) {
                ++pos_;
            } else if (peek() == '#') {
                while (!at_end() && take() != '\n') {
                }
            } else {
                break;
            }
        }
        return pos_ - start;
    }

    unsigned parse_uint(const char* what, unsigned max_value) {
        if (at_end() || peek() < '0' || peek() > '9')
            throw decode_error(std::string("PPM: expected ") + what, pos_);
        unsigned long value = 0;
        while (!at_end() && peek() >= '0' && peek() <= '9') {
            value = value * 10 + static_cast<unsigned long>(take() - '0');
            if (value > max_value)
                throw decode_error(std::string("PPM: ") + what + " out of range", pos_);
        }
        return static_cast<unsigned>(value);
    }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline RgbImage decode_ppm(std::string_view bytes) {
    detail::PpmCursor cur(bytes);

    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '3' && bytes[1] != '6'))
        throw decode_error("PPM: missing P3/P6 magic", 0);
    const bool binary = bytes[1] == '6';
    cur.take();
    cur.take();

    if (cur.skip_separators() == 0)
        throw decode_error("PPM: expected whitespace after magic", cur.offset());
    const unsigned width = cur.parse_uint("width", 1u << 20);
    if (cur.skip_separators() == 0)
        throw decode_error("PPM: expected whitespace after width", cur.offset());
    const unsigned height = cur.parse_uint("height", 1u << 20);
    if (cur.skip_separators() == 0)
        throw decode_error("PPM: expected whitespace after height", cur.offset());
    const std::size_t maxval_at = cur.offset();
    const unsigned maxval = cur.parse_uint("maxval", 65535);

    if (width == 0)
        throw decode_error("PPM: width must be positive", maxval_at);
    if (height == 0)
        throw decode_error("PPM: height must be positive", maxval_at);
    if (maxval != 255)
        throw decode_error("PPM: unsupported maxval " + std::to_string(maxval) +
                               " (must be 255)",
                           maxval_at);

    RgbImage image;
    image.height = static_cast<int>(height);
    image.width = static_cast<int>(width);
    const std::size_t samples = std::size_t{width} * height * 3;
    image.pixels.reserve(std::size_t{width} * height);

    if (binary) {
        // Exactly one whitespace byte separates the maxval from the raster.
        if (cur.at_end() || !detail::PpmCursor::is_space(cur.peek()))
            throw decode_error("PPM: expected single whitespace before raster", cur.offset());
        cur.take();
        if (bytes.size() - cur.offset() < samples)
            throw decode_error("PPM: truncated body, need " + std::to_string(samples) +
                                   " raster bytes",
                               bytes.size());
        std::size_t at = cur.offset();
        for (std::size_t i = 0; i < samples; i += 3) {
            image.pixels.push_back(Rgb{static_cast<std::uint8_t>(bytes[at]),
                                       static_cast<std::uint8_t>(bytes[at + 1]),
                                       static_cast<std::uint8_t>(bytes[at + 2])});
            at += 3;
        }
    } else {
        std::uint8_t triple[3];
        for (std::size_t i = 0; i < samples; ++i) {
            if (cur.skip_separators() == 0)
                throw decode_error("PPM: expected whitespace between samples", cur.offset());
            if (cur.at_end())
                throw decode_error("PPM: truncated body, got " + std::to_string(i) + " of " +
                                       std::to_string(samples) + " samples",
                                   cur.offset());
            triple[i % 3] = static_cast<std::uint8_t>(cur.parse_uint("sample", 255));
            if (i % 3 == 2)
                image.pixels.push_back(Rgb{triple[0], triple[1], triple[2]});
        }
    }
    // Trailing bytes after the raster are ignored.
    return image;
}

inline std::string encode_ppm_p6(const RgbImage& image) {
    require_valid(image);
    std::string out;
    out += "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + image.pixels.size() * 3);
    for (const Rgb& px : image.pixels) {
        out.push_back(static_cast<char>(px.r));
        out.push_back(static_cast<char>(px.g));
        out.push_back(static_cast<char>(px.b));
    }
    return out;
}

inline RgbImage load_ppm(const std::filesystem::path& path) {
    try {
        return decode_ppm(read_file_bytes(path));
    } catch (const decode_error& e) {
        throw input_error(path.string() + ": " + e.what());
    }
}

inline void write_ppm_p6(const RgbImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw input_error("cannot open file for writing: " + path.string());
    const std::string bytes = encode_ppm_p6(image);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw input_error("error writing file: " + path.string());
}

}  // namespace imclust
