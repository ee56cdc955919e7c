#pragma once

#include <cmath>
#include <span>

namespace imclust {

// First three central moments of an intensity distribution: mean,
// population standard deviation, and the cube root of the mean cubed
// deviation (signed, so negative asymmetry survives).
struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
    double skewness = 0.0;

    bool operator==(const Moments&) const = default;
};

// Moments over `values`, summed in list order. An empty list (which can
// only be a high/low partition of a constant channel) yields
// (fallback_mean, 0, 0) so the feature stays continuous as the channel
// approaches constancy.
inline Moments moments_of(std::span<const double> values, double fallback_mean) {
    if (values.empty())
        return Moments{fallback_mean, 0.0, 0.0};

    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    const double mean = sum / n;

    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    // std::cbrt is the signed cube root.
    return Moments{mean, std::sqrt(m2 / n), std::cbrt(m3 / n)};
}

}  // namespace imclust
