#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dsclust/affinity.hpp"
#include "dsclust/baselines.hpp"
#include "dsclust/dominant_sets.hpp"
#include "dsclust/embeddings.hpp"
#include "dsclust/metrics.hpp"
#include "dsclust/serialize.hpp"
#include "dsclust/sweep.hpp"

namespace {

// Failed stages are named in the error message so batch logs stay greppable.
template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const dsclust::input_error& e) {
        throw dsclust::input_error(std::string(name) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(name) + ": " + e.what());
    }
}

void emit(const std::string& content, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << content;
        if (!std::cout) throw dsclust::input_error("io: failed writing to stdout");
    } else {
        stage("io", [&] { dsclust::write_file_atomic(output_path, content); });
    }
}

dsclust::EmbeddingSet load_input(const std::string& path) {
    return stage("parse", [&] { return dsclust::load_embeddings(path); });
}

dsclust::LabelMethod parse_labeling(const std::string& name) {
    if (name == "max") return dsclust::LabelMethod::max;
    if (name == "hungarian") return dsclust::LabelMethod::hungarian;
    throw dsclust::input_error("parse: unknown labeling method \"" + name + "\"");
}

struct SynthArgs {
    int clusters = 4;
    int points = 10;
    int dim = 32;
    double noise = 0.05;
    std::uint64_t seed = 0;
    std::string output;
};

struct ClusterArgs {
    std::string input;
    std::string output;
    std::string algorithm = "ds";
    double theta = 0.1;
    double epsilon = 1e-6;
    int max_iters = 10000;
    Eigen::Index knn = 7;
    int k = 0;
    std::string k_from;
    std::uint64_t seed = 0;
    std::string dump_affinity;
    bool k_given = false;
    bool theta_given = false;
    bool epsilon_given = false;
    bool seed_given = false;
};

struct EvaluateArgs {
    std::string input;
    std::string clusters;
    std::string external;
    std::string labeling = "hungarian";
    std::string output;
    bool csv = false;
    bool labeling_given = false;
};

struct EstimateArgs {
    std::string input;
    Eigen::Index knn = 7;
};

struct SweepArgs {
    std::string input;
    std::vector<double> thetas;
    std::vector<double> epsilons;
    Eigen::Index knn = 7;
    std::string labeling = "hungarian";
    int max_iters = 10000;
    unsigned threads = 0;
    std::string output;
};

int run_synth(const SynthArgs& args) {
    const dsclust::EmbeddingSet set = stage("parse", [&] {
        return dsclust::synth_embeddings(args.clusters, args.points, args.dim, args.noise,
                                         args.seed);
    });
    std::ostringstream out;
    dsclust::save_embeddings(set, out);
    emit(out.str(), args.output);
    std::cerr << "synth: " << set.size() << " points, dim " << set.dim() << ", "
              << args.clusters << " clusters\n";
    return 0;
}

int run_cluster(const ClusterArgs& args) {
    const dsclust::EmbeddingSet set = load_input(args.input);

    dsclust::Clustering clustering;
    dsclust::ClusteringParams params;
    long long iterations = 0;

    const bool need_affinity =
        args.algorithm == "ds" || args.k_from == "eigengap" || !args.dump_affinity.empty();
    std::optional<dsclust::AffinityMatrix> affinity;
    if (need_affinity)
        affinity.emplace(stage("affinity", [&] { return dsclust::build_affinity(set.features, args.knn); }));

    if (!args.dump_affinity.empty()) {
        std::ostringstream out;
        dsclust::write_affinity_csv(*affinity, out);
        stage("io", [&] { dsclust::write_file_atomic(args.dump_affinity, out.str()); });
    }

    if (args.algorithm == "ds") {
        if (args.k_given || !args.k_from.empty())
            throw dsclust::input_error("parse: --k/--k-from apply to --algorithm kmeans only");
        if (args.seed_given)
            throw dsclust::input_error("parse: --seed applies to --algorithm kmeans only");
        dsclust::SolverConfig config;
        config.theta = args.theta;
        config.epsilon = args.epsilon;
        config.max_iterations = args.max_iters;
        stage("solver", [&] { config.validate(); });
        clustering = stage("solver", [&] { return dsclust::peel_clusters(*affinity, config); });
        params.algorithm = "ds";
        params.theta = args.theta;
        params.epsilon = args.epsilon;
        for (const dsclust::Cluster& c : clustering.clusters) iterations += c.iterations;
    } else if (args.algorithm == "kmeans") {
        if (args.theta_given || args.epsilon_given)
            throw dsclust::input_error("parse: --theta/--epsilon apply to --algorithm ds only");
        if (args.k_given == !args.k_from.empty())
            throw dsclust::input_error("parse: kmeans needs exactly one of --k or --k-from");
        dsclust::KMeansConfig config;
        if (args.k_given) {
            config.k = args.k;
        } else if (args.k_from == "eigengap") {
            config.k = stage("solver", [&] { return dsclust::eigengap_estimate(*affinity); });
        } else {
            throw dsclust::input_error("parse: unknown --k-from source \"" + args.k_from + "\"");
        }
        config.max_iterations = args.max_iters;
        config.seed = args.seed;
        stage("solver", [&] { config.validate(set.size()); });
        clustering = stage("solver", [&] { return dsclust::kmeans_cosine(set.features, config); });
        params.algorithm = "kmeans";
        params.k = config.k;
        params.seed = config.seed;
        if (!clustering.clusters.empty()) iterations = clustering.clusters.front().iterations;
    } else {
        throw dsclust::input_error("parse: unknown algorithm \"" + args.algorithm + "\"");
    }

    emit(dsclust::clustering_to_json(clustering, set, params), args.output);
    std::cerr << "cluster: " << set.size() << " points, dim " << set.dim() << ", "
              << clustering.clusters.size() << " clusters, " << iterations << " iterations\n";
    return 0;
}

int run_evaluate(const EvaluateArgs& args) {
    if (args.clusters.empty() == args.external.empty())
        throw dsclust::input_error("parse: need exactly one of --clusters or --external");
    const dsclust::EmbeddingSet set = load_input(args.input);
    if (!set.labeled())
        throw dsclust::input_error("parse: evaluation needs a labeled input set");

    dsclust::LoadedClustering loaded;
    if (!args.clusters.empty()) {
        std::ifstream f(args.clusters);
        if (!f) throw dsclust::input_error("io: cannot open \"" + args.clusters + "\"");
        std::ostringstream buf;
        buf << f.rdbuf();
        loaded = stage("parse", [&] { return dsclust::clustering_from_json(buf.str(), set); });
    } else {
        std::ifstream f(args.external);
        if (!f) throw dsclust::input_error("io: cannot open \"" + args.external + "\"");
        loaded = stage("parse", [&] { return dsclust::external_assignment_from_csv(f, set); });
    }

    const dsclust::LabelMethod method = parse_labeling(args.labeling);
    if (method == dsclust::LabelMethod::max && loaded.algorithm != "ds")
        throw dsclust::input_error(
            "parse: --labeling max needs solver weights; this clustering came from \"" +
            loaded.algorithm + "\"");

    const dsclust::EvaluationReport report = stage(
        "solver", [&] { return dsclust::evaluate_clustering(loaded.clustering, set.labels, method); });
    emit(args.csv ? dsclust::report_to_csv_line(report) : dsclust::report_to_json(report),
         args.output);
    return 0;
}

int run_estimate_k(const EstimateArgs& args) {
    const dsclust::EmbeddingSet set = load_input(args.input);
    const dsclust::AffinityMatrix affinity =
        stage("affinity", [&] { return dsclust::build_affinity(set.features, args.knn); });
    const int k = stage("solver", [&] { return dsclust::eigengap_estimate(affinity); });
    std::cout << k << "\n";
    return 0;
}

int run_sweep(const SweepArgs& args) {
    const dsclust::EmbeddingSet set = load_input(args.input);
    dsclust::SweepAxes axes = dsclust::default_sweep_axes();
    if (!args.thetas.empty()) axes.thetas = args.thetas;
    if (!args.epsilons.empty()) axes.epsilons = args.epsilons;
    const dsclust::LabelMethod method = parse_labeling(args.labeling);
    const std::vector<dsclust::SweepRow> rows = stage("solver", [&] {
        return dsclust::run_sweep(set, axes, args.knn, method, args.max_iters, args.threads);
    });
    std::ostringstream out;
    dsclust::write_sweep_csv(rows, out);
    emit(out.str(), args.output);
    std::cerr << "sweep: " << axes.thetas.size() << "x" << axes.epsilons.size() << " grid, "
              << set.size() << " points\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dominant-set clustering over locally scaled cosine affinities"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic labeled embedding set");
    synth->add_option("--clusters", synth_args.clusters, "number of clusters")
        ->capture_default_str();
    synth->add_option("--points", synth_args.points, "points per cluster")->capture_default_str();
    synth->add_option("--dim", synth_args.dim, "embedding dimension")->capture_default_str();
    synth->add_option("--noise", synth_args.noise, "noise scale")->capture_default_str();
    synth->add_option("--seed", synth_args.seed, "random seed")->capture_default_str();
    synth->add_option("--output,-o", synth_args.output, "output CSV (stdout when omitted)");

    ClusterArgs cluster_args;
    CLI::App* cluster = app.add_subcommand("cluster", "cluster an embedding set");
    cluster->add_option("--input,-i", cluster_args.input, "embeddings CSV")->required();
    cluster->add_option("--output,-o", cluster_args.output, "output JSON (stdout when omitted)");
    cluster->add_option("--algorithm,-a", cluster_args.algorithm, "ds or kmeans")
        ->capture_default_str();
    CLI::Option* theta_opt =
        cluster->add_option("--theta", cluster_args.theta, "support cutoff fraction")
            ->capture_default_str();
    CLI::Option* epsilon_opt =
        cluster->add_option("--epsilon", cluster_args.epsilon, "convergence threshold")
            ->capture_default_str();
    cluster->add_option("--max-iters", cluster_args.max_iters, "iteration cap per extraction")
        ->capture_default_str();
    cluster->add_option("--knn", cluster_args.knn, "neighbors for local scaling")
        ->capture_default_str();
    CLI::Option* k_opt = cluster->add_option("--k", cluster_args.k, "kmeans cluster count");
    cluster->add_option("--k-from", cluster_args.k_from, "kmeans cluster count source (eigengap)");
    CLI::Option* seed_opt = cluster->add_option("--seed", cluster_args.seed, "kmeans seed");
    cluster->add_option("--dump-affinity", cluster_args.dump_affinity,
                        "also write the affinity matrix CSV here");

    EvaluateArgs evaluate_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "score a clustering against true labels");
    evaluate->add_option("--input,-i", evaluate_args.input, "labeled embeddings CSV")->required();
    evaluate->add_option("--clusters,-c", evaluate_args.clusters, "clustering JSON to score");
    evaluate->add_option("--external,-e", evaluate_args.external,
                         "external id,cluster_id CSV to score");
    evaluate->add_option("--labeling,-l", evaluate_args.labeling, "max or hungarian")
        ->capture_default_str();
    evaluate->add_option("--output,-o", evaluate_args.output, "output path (stdout when omitted)");
    evaluate->add_flag("--csv", evaluate_args.csv, "one-line CSV instead of JSON");

    EstimateArgs estimate_args;
    CLI::App* estimate = app.add_subcommand("estimate-k", "eigengap cluster-count estimate");
    estimate->add_option("--input,-i", estimate_args.input, "embeddings CSV")->required();
    estimate->add_option("--knn", estimate_args.knn, "neighbors for local scaling")
        ->capture_default_str();

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "grid over theta and epsilon");
    sweep->add_option("--input,-i", sweep_args.input, "labeled embeddings CSV")->required();
    sweep->add_option("--thetas", sweep_args.thetas, "theta values (default built-in grid)")
        ->delimiter(',');
    sweep->add_option("--epsilons", sweep_args.epsilons, "epsilon values (default decades)")
        ->delimiter(',');
    sweep->add_option("--knn", sweep_args.knn, "neighbors for local scaling")
        ->capture_default_str();
    sweep->add_option("--labeling,-l", sweep_args.labeling, "max or hungarian")
        ->capture_default_str();
    sweep->add_option("--max-iters", sweep_args.max_iters, "iteration cap per extraction")
        ->capture_default_str();
    sweep->add_option("--threads", sweep_args.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    sweep->add_option("--output,-o", sweep_args.output, "output CSV (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    cluster_args.theta_given = theta_opt->count() > 0;
    cluster_args.epsilon_given = epsilon_opt->count() > 0;
    cluster_args.k_given = k_opt->count() > 0;
    cluster_args.seed_given = seed_opt->count() > 0;

    try {
        if (app.got_subcommand(synth)) return run_synth(synth_args);
        if (app.got_subcommand(cluster)) return run_cluster(cluster_args);
        if (app.got_subcommand(evaluate)) return run_evaluate(evaluate_args);
        if (app.got_subcommand(estimate)) return run_estimate_k(estimate_args);
        if (app.got_subcommand(sweep)) return run_sweep(sweep_args);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const dsclust::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
