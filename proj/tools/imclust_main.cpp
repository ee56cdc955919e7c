#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "imclust/imclust.hpp"

namespace {

struct ExtractArgs {
    std::string input;
    std::string labeling = "subdirs";
    std::string method = "moments";
    std::string out;
    bool normalize = false;
};

struct ClusterArgs {
    std::string features;
    int k = 10;
    std::uint64_t seed = 0;
    std::string init = "kmeanspp";
    int max_iter = 100;
    std::string out;
};

struct EvaluateArgs {
    std::string assignments;
    std::string out;
};

void run_extract(const ExtractArgs& args) {
    using namespace imclust;
    const DatasetManifest manifest = ingest(args.input, parse_labeling(args.labeling));
    FeatureTable table = extract_table(manifest, parse_feature_method(args.method));
    if (args.normalize)
        zscore_normalize(table);
    write_features(table, args.out);
    std::printf("wrote %s (%zu rows, %zu features)\n", args.out.c_str(), table.rows.size(),
                table.dimension);
}

void run_cluster(const ClusterArgs& args) {
    using namespace imclust;
    const FeatureTable table = read_features(args.features);
    KMeansConfig config;
    config.k = args.k;
    config.seed = args.seed;
    config.init = parse_kmeans_init(args.init);
    config.max_iterations = args.max_iter;
    const KMeansModel model = kmeans(feature_matrix(table), config);
    write_text_atomic(args.out, assignments_csv(to_labeled_assignments(table, model)));
    std::printf("wrote %s (%zu rows, k=%d, %s after %d iterations, sse=%s)\n", args.out.c_str(),
                model.assignments.size(), args.k,
                model.converged ? "converged" : "not converged", model.iterations_run,
                csv::format_double(model.sse).c_str());
}

void run_evaluate(const EvaluateArgs& args) {
    using namespace imclust;
    const std::string text = read_file_bytes(args.assignments);
    std::vector<LabeledAssignment> assignments;
    try {
        assignments = parse_assignments_csv(text);
    } catch (const input_error& e) {
        throw input_error(args.assignments + ": " + e.what());
    }
    const EvaluationReport report = score(assignments, map_clusters(assignments));
    write_text_atomic(args.out, report_csv(report));
    std::fputs(report_table(report).c_str(), stdout);
    std::printf("wrote %s\n", args.out.c_str());
}

void run_pipeline_cmd(const std::string& config_path) {
    using namespace imclust;
    const PipelineConfig config = parse_config_file(config_path);
    const PipelineResult result = run_pipeline(config);
    std::fputs(report_table(result.report).c_str(), stdout);
    std::printf("wrote features.csv, assignments.csv, report.csv, run_metadata.txt to %s\n",
                config.output_dir.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"color image clustering: feature extraction, k-means, evaluation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(imclust::version));

    ExtractArgs extract;
    CLI::App* extract_cmd =
        app.add_subcommand("extract", "extract feature vectors from an image directory");
    extract_cmd->add_option("--input", extract.input, "image directory root")->required();
    extract_cmd->add_option("--labeling", extract.labeling, "label scheme: subdirs|wang_numeric")
        ->check(CLI::IsMember({"subdirs", "wang_numeric"}));
    extract_cmd->add_option("--method", extract.method, "feature method: moments|btc")
        ->check(CLI::IsMember({"moments", "btc"}));
    extract_cmd->add_option("--out", extract.out, "output features.csv path")->required();
    extract_cmd->add_flag("--normalize", extract.normalize, "z-score normalize each dimension");

    ClusterArgs cluster;
    CLI::App* cluster_cmd = app.add_subcommand("cluster", "k-means over a feature table");
    cluster_cmd->add_option("--features", cluster.features, "input features.csv path")->required();
    cluster_cmd->add_option("--k", cluster.k, "number of clusters")->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--seed", cluster.seed, "RNG seed");
    cluster_cmd->add_option("--init", cluster.init, "initialization: kmeanspp|random_points")
        ->check(CLI::IsMember({"kmeanspp", "random_points"}));
    cluster_cmd->add_option("--max-iter", cluster.max_iter, "iteration cap")
        ->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--out", cluster.out, "output assignments.csv path")->required();

    EvaluateArgs evaluate;
    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "score assignments against ground-truth labels");
    evaluate_cmd->add_option("--assignments", evaluate.assignments, "input assignments.csv path")
        ->required();
    evaluate_cmd->add_option("--out", evaluate.out, "output report.csv path")->required();

    std::string config_path;
    CLI::App* pipeline_cmd =
        app.add_subcommand("pipeline", "run extract, cluster, evaluate from a config file");
    pipeline_cmd->add_option("--config", config_path, "key=value config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (extract_cmd->parsed())
            run_extract(extract);
        else if (cluster_cmd->parsed())
            run_cluster(cluster);
        else if (evaluate_cmd->parsed())
            run_evaluate(evaluate);
        else if (pipeline_cmd->parsed())
            run_pipeline_cmd(config_path);
    } catch (const imclust::input_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const imclust::internal_error& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
    return 0;
}
