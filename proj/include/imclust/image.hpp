#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imclust/errors.hpp"

namespace imclust {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

// Decoded raster, row-major from the top-left corner.
struct RgbImage {
    int height = 0;  // pixel rows
    int width = 0;   // pixel columns
    std::vector<Rgb> pixels;

    std::size_t pixel_count() const { return pixels.size(); }

    bool operator==(const RgbImage&) const = default;
};

inline void require_valid(const RgbImage& image) {
    if (image.height <= 0 || image.width <= 0)
        throw internal_error("image has non-positive dimensions");
    if (image.pixels.size() !=
        static_cast<std::size_t>(image.height) * static_cast<std::size_t>(image.width))
        throw internal_error("image pixel count does not match height*width");
}

enum class ChannelSource { R, G, B, RH, RL, GH, GL, BH, BL };

inline std::string to_string(ChannelSource s) {
    switch (s) {
        case ChannelSource::R: return "R";
        case ChannelSource::G: return "G";
        case ChannelSource::B: return "B";
        case ChannelSource::RH: return "RH";
        case ChannelSource::RL: return "RL";
        case ChannelSource::GH: return "GH";
        case ChannelSource::GL: return "GL";
        case ChannelSource::BH: return "BH";
        case ChannelSource::BL: return "BL";
    }
    return "?";
}

// Intensities from one channel, in raster order. A full plane is never
// empty; a high/low partition may be.
struct ChannelValues {
    ChannelSource source = ChannelSource::R;
    std::vector<double> values;
};

struct RgbPlanes {
    ChannelValues r;
    ChannelValues g;
    ChannelValues b;
};

inline RgbPlanes split_channels(const RgbImage& image) {
    require_valid(image);
    RgbPlanes planes;
    planes.r.source = ChannelSource::R;
    planes.g.source = ChannelSource::G;
    planes.b.source = ChannelSource::B;
    planes.r.values.reserve(image.pixels.size());
    planes.g.values.reserve(image.pixels.size());
    planes.b.values.reserve(image.pixels.size());
    for (const Rgb& px : image.pixels) {
        planes.r.values.push_back(px.r);
        planes.g.values.push_back(px.g);
        planes.b.values.push_back(px.b);
    }
    return planes;
}

}  // namespace imclust
