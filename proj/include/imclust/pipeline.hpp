#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "imclust/dataset.hpp"
#include "imclust/errors.hpp"
#include "imclust/evaluation.hpp"
#include "imclust/feature_store.hpp"
#include "imclust/features.hpp"
#include "imclust/image_io.hpp"
#include "imclust/io.hpp"
#include "imclust/kmeans.hpp"
#include "imclust/moments.hpp"
#include "imclust/version.hpp"

// End-to-end pipeline: ingest -> extract -> cluster -> evaluate, with all
// intermediate tables written to the output directory.

namespace imclust {

struct PipelineConfig {
    std::filesystem::path input;
    Labeling labeling = Labeling::subdirs;
    FeatureMethod method = FeatureMethod::moments;
    int k = 10;
    std::uint64_t seed = 0;
    KMeansInit init = KMeansInit::kmeanspp;
    int max_iterations = 100;
    bool normalize = false;
    std::filesystem::path output_dir;
};

struct PipelineResult {
    FeatureTable features;
    KMeansModel model;
    EvaluationReport report;
};

namespace detail {

template <typename F>
auto tagged_stage(const char* stage, F&& body) {
    try {
        return body();
    } catch (const internal_error& e) {
        throw internal_error(std::string(stage) + ": " + e.what());
    } catch (const input_error& e) {
        throw input_error(std::string(stage) + ": " + e.what());
    }
}

}  // namespace detail

// Per-image feature extraction, fanned out across worker threads. Each row
// is computed independently and stored by manifest index, so the result is
// identical to a sequential run. threads == 0 picks the hardware default.
inline FeatureTable extract_table(const DatasetManifest& manifest, FeatureMethod method,
                                  unsigned threads = 0) {
    if (manifest.entries.empty())
        throw input_error("extract: empty manifest");
    FeatureTable table;
    table.method = method;
    table.dimension = feature_dimension(method);
    table.rows.resize(manifest.entries.size());

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(manifest.entries.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= manifest.entries.size())
                return;
            try {
                const ManifestEntry& entry = manifest.entries[i];
                FeatureVector fv = extract_features(load_image(entry.path), method);
                fv.image_id = entry.image_id;
                fv.label = entry.label;
                table.rows[i] = std::move(fv);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(manifest.entries.size());
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
    return table;
}

// Z-scores every dimension over the table (population statistics).
// Zero-variance dimensions become all-zero instead of dividing by zero.
inline void zscore_normalize(FeatureTable& table) {
    if (table.rows.empty())
        return;
    const std::size_t n = table.rows.size();
    std::vector<double> column(n);
    for (std::size_t d = 0; d < table.dimension; ++d) {
        for (std::size_t i = 0; i < n; ++i)
            column[i] = table.rows[i].values[d];
        const Moments m = moments_of(column, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double& v = table.rows[i].values[d];
            v = m.stddev > 0.0 ? (v - m.mean) / m.stddev : 0.0;
        }
    }
}

inline std::vector<LabeledAssignment> to_labeled_assignments(const FeatureTable& table,
                                                             const KMeansModel& model) {
    if (table.rows.size() != model.assignments.size())
        throw internal_error("assignment count does not match feature row count");
    std::vector<LabeledAssignment> out;
    out.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        out.push_back(LabeledAssignment{table.rows[i].image_id,
                                        table.rows[i].label.value_or(""),
                                        model.assignments[i]});
    return out;
}

inline Matrix feature_matrix(const FeatureTable& table) {
    Matrix rows;
    rows.reserve(table.rows.size());
    for (const FeatureVector& row : table.rows)
        rows.push_back(row.values);
    return rows;
}

inline std::string run_metadata_text(const PipelineConfig& config) {
    std::string out;
    out += "version=" + std::string(version) + "\n";
    out += "input=" + config.input.string() + "\n";
    out += "labeling=" + std::string(to_string(config.labeling)) + "\n";
    out += "method=" + std::string(to_string(config.method)) + "\n";
    out += "k=" + std::to_string(config.k) + "\n";
    out += "seed=" + std::to_string(config.seed) + "\n";
    out += "init=" + std::string(to_string(config.init)) + "\n";
    out += "max_iter=" + std::to_string(config.max_iterations) + "\n";
    out += std::string("normalize=") + (config.normalize ? "true" : "false") + "\n";
    out += "output_dir=" + config.output_dir.string() + "\n";
    return out;
}

// Parses the flat key=value config format. '#' starts a comment line.
inline PipelineConfig parse_config_text(std::string_view text) {
    PipelineConfig config;
    bool have_input = false;
    bool have_output = false;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    for (std::string_view line : csv::split_lines(text)) {
        ++line_no;
        const auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
                s.remove_suffix(1);
            return s;
        };
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw input_error("config line " + std::to_string(line_no) +
                              ": expected key=value");
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (!seen.insert(key).second)
            throw input_error("config line " + std::to_string(line_no) + ": duplicate key '" +
                              key + "'");
        if (key == "input") {
            config.input = value;
            have_input = true;
        } else if (key == "output_dir") {
            config.output_dir = value;
            have_output = true;
        } else if (key == "labeling") {
            config.labeling = parse_labeling(value);
        } else if (key == "method") {
            config.method = parse_feature_method(value);
        } else if (key == "k") {
            config.k = static_cast<int>(csv::parse_long(value, line_no));
            if (config.k < 1)
                throw input_error("config line " + std::to_string(line_no) +
                                  ": k must be positive");
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(csv::parse_long(value, line_no));
        } else if (key == "init") {
            config.init = parse_kmeans_init(value);
        } else if (key == "max_iter") {
            config.max_iterations = static_cast<int>(csv::parse_long(value, line_no));
            if (config.max_iterations < 1)
                throw input_error("config line " + std::to_string(line_no) +
                                  ": max_iter must be positive");
        } else if (key == "normalize") {
            if (value == "true")
                config.normalize = true;
            else if (value == "false")
                config.normalize = false;
            else
                throw input_error("config line " + std::to_string(line_no) +
                                  ": normalize must be true or false");
        } else {
            throw input_error("config line " + std::to_string(line_no) + ": unknown key '" +
                              key + "'");
        }
    }
    if (!have_input)
        throw input_error("config: missing required key 'input'");
    if (!have_output)
        throw input_error("config: missing required key 'output_dir'");
    return config;
}

inline PipelineConfig parse_config_file(const std::filesystem::path& path) {
    try {
        return parse_config_text(read_file_bytes(path));
    } catch (const input_error& e) {
        throw input_error(path.string() + ": " + e.what());
    }
}

inline PipelineResult run_pipeline(const PipelineConfig& config) {
    namespace fs = std::filesystem;

    const DatasetManifest manifest = detail::tagged_stage(
        "ingest", [&] { return ingest(config.input, config.labeling); });

    PipelineResult result;
    result.features = detail::tagged_stage("extract", [&] {
        FeatureTable table = extract_table(manifest, config.method);
        if (config.normalize)
            zscore_normalize(table);
        return table;
    });

    result.model = detail::tagged_stage("cluster", [&] {
        KMeansConfig kc;
        kc.k = config.k;
        kc.seed = config.seed;
        kc.init = config.init;
        kc.max_iterations = config.max_iterations;
        return kmeans(feature_matrix(result.features), kc);
    });

    const auto assignments = to_labeled_assignments(result.features, result.model);
    result.report = detail::tagged_stage("evaluate", [&] {
        for (const auto& a : assignments)
            if (a.true_class.empty())
                throw input_error("image " + a.image_id +
                                  " has no class label; evaluation needs labeled data");
        return score(assignments, map_clusters(assignments));
    });

    detail::tagged_stage("write", [&] {
        fs::create_directories(config.output_dir);
        write_text_atomic(config.output_dir / "features.csv", features_csv(result.features));
        write_text_atomic(config.output_dir / "assignments.csv", assignments_csv(assignments));
        write_text_atomic(config.output_dir / "report.csv", report_csv(result.report));
        write_text_atomic(config.output_dir / "run_metadata.txt", run_metadata_text(config));
        return 0;
    });

    return result;
}

}  // namespace imclust
