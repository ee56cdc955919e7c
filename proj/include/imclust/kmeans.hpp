#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "imclust/errors.hpp"

namespace imclust {

using Matrix = std::vector<std::vector<double>>;

enum class KMeansInit { kmeanspp, random_points };

inline std::string_view to_string(KMeansInit init) {
    return init == KMeansInit::kmeanspp ? "kmeanspp" : "random_points";
}

inline KMeansInit parse_kmeans_init(std::string_view name) {
    if (name == "kmeanspp")
        return KMeansInit::kmeanspp;
    if (name == "random_points")
        return KMeansInit::random_points;
    throw input_error("unknown init strategy: " + std::string(name));
}

struct KMeansConfig {
    int k = 10;
    std::uint64_t seed = 0;
    KMeansInit init = KMeansInit::kmeanspp;
    int max_iterations = 100;
};

struct KMeansModel {
    Matrix centroids;
    std::vector<int> assignments;
    int iterations_run = 0;
    bool converged = false;
    double sse = 0.0;                 // within-cluster SSE of the final state
    std::vector<double> sse_history;  // SSE after every assignment and update step
};

namespace detail {

// The std:: distributions are implementation-defined, so draws go through
// these two helpers to keep results identical across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % n;
}

inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return d2;
}

inline void validate_rows(const Matrix& rows, int k) {
    if (rows.empty())
        throw input_error("kmeans: no input rows");
    const std::size_t dim = rows.front().size();
    if (dim == 0)
        throw input_error("kmeans: row 0 has zero dimension");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim)
            throw input_error("kmeans: row " + std::to_string(i) + " has dimension " +
                              std::to_string(rows[i].size()) + ", expected " +
                              std::to_string(dim));
        for (double v : rows[i])
            if (!std::isfinite(v))
                throw input_error("kmeans: row " + std::to_string(i) +
                                  " contains a non-finite value");
    }
    if (k < 1)
        throw input_error("kmeans: k must be positive");
    if (static_cast<std::size_t>(k) > rows.size())
        throw input_error("kmeans: k=" + std::to_string(k) + " exceeds row count " +
                          std::to_string(rows.size()));
}

}  // namespace detail

// Index of the closest centroid by squared Euclidean distance; exact ties
// resolve to the lowest index.
inline int nearest_centroid(std::span<const double> point, const Matrix& centroids) {
    if (centroids.empty())
        throw input_error("nearest_centroid: no centroids");
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.size(); ++j) {
        if (centroids[j].size() != point.size())
            throw input_error("nearest_centroid: centroid " + std::to_string(j) +
                              " has dimension " + std::to_string(centroids[j].size()) +
                              ", expected " + std::to_string(point.size()));
        const double d2 = detail::sq_dist(point, centroids[j]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<int>(j);
        }
    }
    return best;
}

inline Matrix init_centroids(const Matrix& rows, const KMeansConfig& config) {
    detail::validate_rows(rows, config.k);
    const std::size_t n = rows.size();
    const std::size_t k = static_cast<std::size_t>(config.k);
    std::mt19937_64 gen(config.seed);
    Matrix centroids;
    centroids.reserve(k);

    if (config.init == KMeansInit::random_points) {
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i)
            perm[i] = i;
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[detail::uniform_below(gen, i + 1)]);
        for (std::size_t p = 0; p < n && centroids.size() < k; ++p) {
            const auto& candidate = rows[perm[p]];
            bool duplicate = false;
            for (const auto& c : centroids)
                if (c == candidate) {
                    duplicate = true;
                    break;
                }
            if (!duplicate)
                centroids.push_back(candidate);
        }
        if (centroids.size() < k)
            throw input_error("init_centroids: fewer than k=" + std::to_string(k) +
                              " distinct rows for random_points");
        return centroids;
    }

    // kmeans++: first centroid uniform, the rest D^2-weighted.
    centroids.push_back(rows[detail::uniform_below(gen, n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i)
        d2[i] = detail::sq_dist(rows[i], centroids.back());
    while (centroids.size() < k) {
        double total = 0.0;
        for (double w : d2)
            total += w;
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double r = detail::uniform_unit(gen) * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (r < cum) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = detail::uniform_below(gen, n);  // all remaining mass on duplicates
        }
        centroids.push_back(rows[pick]);
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], detail::sq_dist(rows[i], centroids.back()));
    }
    return centroids;
}

namespace detail {

// Gives every empty cluster the row farthest from its own centroid, drawn
// from clusters that can spare a member. Returns the number of rows moved.
inline int repair_empty_clusters(const Matrix& rows, Matrix& centroids,
                                 std::vector<int>& assignments, std::vector<int>& counts,
                                 std::vector<double>& dists) {
    int moved = 0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        if (counts[c] != 0)
            continue;
        std::size_t pick = rows.size();
        double best = -1.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (counts[static_cast<std::size_t>(assignments[i])] < 2)
                continue;
            if (dists[i] > best) {
                best = dists[i];
                pick = i;
            }
        }
        if (pick == rows.size())
            throw internal_error("kmeans: no donor row for empty cluster");
        --counts[static_cast<std::size_t>(assignments[pick])];
        assignments[pick] = static_cast<int>(c);
        counts[c] = 1;
        centroids[c] = rows[pick];
        dists[pick] = 0.0;
        ++moved;
    }
    return moved;
}

}  // namespace detail

// Lloyd iteration from explicit starting centroids. Stops when an
// assignment pass moves no row (converged) or after max_iterations passes.
// Assignment scans rows in index order and centroid updates average in row
// order, so results are bit-reproducible.
inline KMeansModel lloyd(const Matrix& rows, Matrix centroids, int max_iterations = 100) {
    if (centroids.empty())
        throw input_error("lloyd: no initial centroids");
    detail::validate_rows(rows, static_cast<int>(centroids.size()));
    const std::size_t n = rows.size();
    const std::size_t k = centroids.size();
    const std::size_t dim = rows.front().size();
    for (std::size_t c = 0; c < k; ++c)
        if (centroids[c].size() != dim)
            throw input_error("lloyd: centroid " + std::to_string(c) + " has dimension " +
                              std::to_string(centroids[c].size()) + ", expected " +
                              std::to_string(dim));
    if (max_iterations < 1)
        throw input_error("lloyd: max_iterations must be positive");

    KMeansModel model;
    model.centroids = std::move(centroids);
    model.assignments.assign(n, -1);
    std::vector<double> dists(n, 0.0);
    std::vector<int> counts(k, 0);

    while (model.iterations_run < max_iterations) {
        ++model.iterations_run;

        int moves = 0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d2 = detail::sq_dist(rows[i], model.centroids[0]);
            for (std::size_t j = 1; j < k; ++j) {
                const double d2 = detail::sq_dist(rows[i], model.centroids[j]);
                if (d2 < best_d2) {  // strict: ties stay at the lowest index
                    best_d2 = d2;
                    best = static_cast<int>(j);
                }
            }
            if (model.assignments[i] != best)
                ++moves;
            model.assignments[i] = best;
            dists[i] = best_d2;
        }
        counts.assign(k, 0);
        for (int a : model.assignments)
            ++counts[static_cast<std::size_t>(a)];
        moves += detail::repair_empty_clusters(rows, model.centroids, model.assignments,
                                               counts, dists);

        double sse = 0.0;
        for (double d : dists)
            sse += d;
        model.sse_history.push_back(sse);

        if (moves == 0) {
            model.converged = true;
            break;
        }
        if (model.iterations_run == max_iterations)
            break;

        for (std::size_t c = 0; c < k; ++c)
            model.centroids[c].assign(dim, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& centroid = model.centroids[static_cast<std::size_t>(model.assignments[i])];
            for (std::size_t d = 0; d < dim; ++d)
                centroid[d] += rows[i][d];
        }
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t d = 0; d < dim; ++d)
                model.centroids[c][d] /= static_cast<double>(counts[c]);

        sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dists[i] = detail::sq_dist(
                rows[i], model.centroids[static_cast<std::size_t>(model.assignments[i])]);
            sse += dists[i];
        }
        model.sse_history.push_back(sse);
    }

    model.sse = model.sse_history.back();
    return model;
}

inline KMeansModel kmeans(const Matrix& rows, const KMeansConfig& config) {
    detail::validate_rows(rows, config.k);
    return lloyd(rows, init_centroids(rows, config), config.max_iterations);
}

}  // namespace imclust
