#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imclust/errors.hpp"
#include "imclust/image.hpp"
#include "imclust/moments.hpp"

namespace imclust {

enum class FeatureMethod { moments, btc };

inline std::size_t feature_dimension(FeatureMethod method) {
    return method == FeatureMethod::moments ? 9 : 18;
}

inline std::string_view to_string(FeatureMethod method) {
    return method == FeatureMethod::moments ? "moments" : "btc";
}

inline FeatureMethod parse_feature_method(std::string_view name) {
    if (name == "moments")
        return FeatureMethod::moments;
    if (name == "btc")
        return FeatureMethod::btc;
    throw input_error("unknown feature method: " + std::string(name));
}

// One image's descriptor: 9 values for plain color moments, 18 for BTC.
struct FeatureVector {
    std::string image_id;
    std::optional<std::string> label;
    FeatureMethod method = FeatureMethod::moments;
    std::vector<double> values;

    bool operator==(const FeatureVector&) const = default;
};

// Split of one channel plane around its arithmetic mean: `high` holds the
// values strictly above it, `low` everything else, both in raster order.
struct BtcPartition {
    ChannelValues high;
    ChannelValues low;
    double threshold = 0.0;
};

namespace detail {

inline std::pair<ChannelSource, ChannelSource> partition_sources(ChannelSource plane) {
    switch (plane) {
        case ChannelSource::R: return {ChannelSource::RH, ChannelSource::RL};
        case ChannelSource::G: return {ChannelSource::GH, ChannelSource::GL};
        case ChannelSource::B: return {ChannelSource::BH, ChannelSource::BL};
        default:
            throw input_error("btc_split expects a full channel plane, got " + to_string(plane));
    }
}

}  // namespace detail

inline BtcPartition btc_split(const ChannelValues& plane) {
    if (plane.values.empty())
        throw input_error("btc_split: empty channel plane");

    double sum = 0.0;
    for (double v : plane.values)
        sum += v;
    const double threshold = sum / static_cast<double>(plane.values.size());

    auto [high_src, low_src] = detail::partition_sources(plane.source);
    BtcPartition part;
    part.threshold = threshold;
    part.high.source = high_src;
    part.low.source = low_src;
    for (double v : plane.values) {
        if (v > threshold)
            part.high.values.push_back(v);
        else
            part.low.values.push_back(v);  // ties go low: high is strictly above average
    }
    return part;
}

// 9-dim descriptor: (mean, stddev, skewness) of the R, G, B planes.
inline FeatureVector color_moments(const RgbImage& image) {
    const RgbPlanes planes = split_channels(image);
    FeatureVector fv;
    fv.method = FeatureMethod::moments;
    fv.values.reserve(9);
    for (const ChannelValues* plane : {&planes.r, &planes.g, &planes.b}) {
        const Moments m = moments_of(plane->values, 0.0);  // plane is never empty
        fv.values.push_back(m.mean);
        fv.values.push_back(m.stddev);
        fv.values.push_back(m.skewness);
    }
    return fv;
}

// 18-dim descriptor: (mean, stddev, skewness) of RH, RL, GH, GL, BH, BL.
// Partition moments are normalized by the partition's own cardinality; an
// empty partition falls back to the channel threshold.
inline FeatureVector btc_features(const RgbImage& image) {
    const RgbPlanes planes = split_channels(image);
    FeatureVector fv;
    fv.method = FeatureMethod::btc;
    fv.values.reserve(18);
    for (const ChannelValues* plane : {&planes.r, &planes.g, &planes.b}) {
        const BtcPartition part = btc_split(*plane);
        for (const ChannelValues* side : {&part.high, &part.low}) {
            const Moments m = moments_of(side->values, part.threshold);
            fv.values.push_back(m.mean);
            fv.values.push_back(m.stddev);
            fv.values.push_back(m.skewness);
        }
    }
    return fv;
}

inline FeatureVector extract_features(const RgbImage& image, FeatureMethod method) {
    return method == FeatureMethod::moments ? color_moments(image) : btc_features(image);
}

}  // namespace imclust
