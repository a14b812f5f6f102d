#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csv_detail.hpp"
#include "grnf/delaunay.hpp"
#include "grnf/errors.hpp"
#include "grnf/experiments.hpp"
#include "grnf/features.hpp"
#include "grnf/graph_io.hpp"
#include "grnf/map_json.hpp"
#include "grnf/metrics.hpp"
#include "grnf/rng.hpp"

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw grnf::ValidationError("cannot open output file: " + path);
    out << text;
    out.flush();
    if (!out) throw grnf::ValidationError("failed while writing: " + path);
}

// Shared flags for the feature distribution a command samples from.
struct DistributionFlags {
    int kmax = 3;
    double lambda = 1.0;
    double sigma = 1.0;
    std::string norm = "mean";

    grnf::DistributionConfig to_config() const {
        grnf::DistributionConfig config;
        config.k_max = kmax;
        config.lambda = lambda;
        config.sigma = sigma;
        config.normalization = norm == "sum" ? grnf::Normalization::sum : grnf::Normalization::mean;
        return config;
    }
};

void add_distribution_flags(CLI::App* cmd, const std::shared_ptr<DistributionFlags>& flags) {
    cmd->add_option("--kmax", flags->kmax, "Largest tensor order features may use (1-3)")
        ->check(CLI::Range(1, 3))
        ->capture_default_str();
    cmd->add_option("--lambda", flags->lambda, "Poisson rate of the feature-order distribution")
        ->capture_default_str();
    cmd->add_option("--sigma", flags->sigma, "Std of the Gaussian layer coefficients")
        ->capture_default_str();
    cmd->add_option("--norm", flags->norm, "Bucket normalization applied by the layers")
        ->check(CLI::IsMember({"mean", "sum"}))
        ->capture_default_str();
}

void setup_gen_sbm(CLI::App* gen) {
    struct Opts {
        int n = 12;
        std::vector<int> blocks;
        double p_in = 0.4;
        double p_out = 0.1;
        int count = 0;
        std::uint64_t seed = 0;
        std::string out;
        int label = 0;
    };
    auto opts = std::make_shared<Opts>();
    CLI::App* cmd = gen->add_subcommand("sbm", "Sample stochastic-block-model graphs");
    cmd->add_option("--n", opts->n, "Nodes per graph")->capture_default_str();
    cmd->add_option("--blocks", opts->blocks,
                    "Comma-separated community sizes (default: one block of n)")
        ->delimiter(',');
    cmd->add_option("--p-in", opts->p_in, "Edge probability inside a community")
        ->capture_default_str();
    cmd->add_option("--p-out", opts->p_out, "Edge probability between communities")
        ->capture_default_str();
    cmd->add_option("--count", opts->count, "Number of graphs")->required();
    cmd->add_option("--seed", opts->seed, "Base seed")->capture_default_str();
    cmd->add_option("--out", opts->out, "Output corpus (one graph per line)")->required();
    cmd->add_option("--label", opts->label, "Class label recorded for every graph")
        ->capture_default_str();
    cmd->callback([opts]() {
        grnf::SbmParams params;
        params.n = opts->n;
        params.communities = opts->blocks.empty() ? std::vector<int>{opts->n} : opts->blocks;
        params.p_in = opts->p_in;
        params.p_out = opts->p_out;
        grnf::Corpus corpus;
        corpus.graphs = grnf::sbm_generate(params, opts->count, opts->seed);
        corpus.labels.assign(corpus.graphs.size(), opts->label);
        grnf::save_corpus(corpus, opts->out);
    });
}

void setup_gen_delaunay(CLI::App* gen) {
    struct Opts {
        int points = 12;
        int seeds_per_class = 12;
        double noise = 1.0;
        int classes = 2;
        int count = 0;
        std::uint64_t seed = 0;
        std::string out;
    };
    auto opts = std::make_shared<Opts>();
    CLI::App* cmd = gen->add_subcommand(
        "delaunay", "Sample triangulated point-cloud graphs, one class per seed-point set");
    cmd->add_option("--points", opts->points, "Nodes per graph")->capture_default_str();
    cmd->add_option("--seeds-per-class", opts->seeds_per_class,
                    "Anchor points defining each class")
        ->capture_default_str();
    cmd->add_option("--noise", opts->noise, "Gaussian displacement around the anchors")
        ->capture_default_str();
    cmd->add_option("--classes", opts->classes, "Number of classes")->capture_default_str();
    cmd->add_option("--count", opts->count, "Graphs per class")->required();
    cmd->add_option("--seed", opts->seed, "Base seed")->capture_default_str();
    cmd->add_option("--out", opts->out, "Output corpus (one graph per line)")->required();
    cmd->callback([opts]() {
        if (opts->classes < 1) throw grnf::ValidationError("gen delaunay: classes must be >= 1");
        grnf::Corpus corpus;
        for (int c = 0; c < opts->classes; ++c) {
            grnf::DelaunayParams params;
            params.points_per_graph = opts->points;
            params.noise_sigma = opts->noise;
            params.seed_points = grnf::random_seed_points(
                opts->seeds_per_class, params.box_min, params.box_max,
                grnf::derive_seed(opts->seed, static_cast<std::uint64_t>(c), std::uint64_t{0}));
            auto graphs = grnf::delaunay_generate(
                params, opts->count,
                grnf::derive_seed(opts->seed, static_cast<std::uint64_t>(c), std::uint64_t{1}));
            for (grnf::Graph& g : graphs) {
                corpus.graphs.push_back(std::move(g));
                corpus.labels.push_back(c);
            }
        }
        grnf::save_corpus(corpus, opts->out);
    });
}

void setup_embed(CLI::App& app) {
    struct Opts {
        std::string input;
        int M = 0;
        std::uint64_t seed = 0;
        std::string out;
        bool weighted = false;
        double proposal_sigma = 0.0;
        std::string save_map;
    };
    auto opts = std::make_shared<Opts>();
    auto dist = std::make_shared<DistributionFlags>();
    CLI::App* cmd = app.add_subcommand("embed", "Map a graph corpus to feature vectors");
    cmd->add_option("--input", opts->input, "Corpus to embed")->required();
    cmd->add_option("--M", opts->M, "Number of random features")->required();
    cmd->add_option("--seed", opts->seed, "Map seed")->capture_default_str();
    add_distribution_flags(cmd, dist);
    cmd->add_option("--out", opts->out, "Output CSV: label,z0,...,z{M-1}")->required();
    CLI::Option* weighted =
        cmd->add_flag("--weighted", opts->weighted,
                      "Sample from a proposal distribution and importance-reweight");
    CLI::Option* psigma = cmd->add_option("--proposal-sigma", opts->proposal_sigma,
                                          "Coefficient std of the proposal distribution");
    weighted->needs(psigma);
    psigma->needs(weighted);
    cmd->add_option("--save-map", opts->save_map, "Also write the sampled map as JSON");
    cmd->callback([opts, dist]() {
        const grnf::Corpus corpus = grnf::load_corpus(opts->input);
        const grnf::DistributionConfig config = dist->to_config();
        grnf::GrnfMap map;
        if (opts->weighted) {
            grnf::DistributionConfig proposal = config;
            proposal.sigma = opts->proposal_sigma;
            map = grnf::build_grnf_weighted(opts->M, config, proposal, opts->seed);
        } else {
            map = grnf::build_grnf(opts->M, config, opts->seed);
        }
        std::string csv = "label";
        for (int m = 0; m < opts->M; ++m) csv += ",z" + std::to_string(m);
        csv += '\n';
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            csv += std::to_string(corpus.labels[i]);
            for (double v : grnf::embed(map, corpus.graphs[i])) {
                csv += ',';
                csv += grnf::detail::format_double(v);
            }
            csv += '\n';
        }
        write_file(opts->out, csv);
        if (!opts->save_map.empty()) grnf::save_map(map, opts->save_map);
    });
}

void setup_dim(CLI::App& app) {
    struct Opts {
        double epsilon = 0.0;
        double delta = 0.0;
        std::string kind;
    };
    auto opts = std::make_shared<Opts>();
    CLI::App* cmd = app.add_subcommand(
        "dim", "Features needed for accuracy epsilon at failure probability delta");
    cmd->add_option("--epsilon", opts->epsilon, "Additive accuracy target")->required();
    cmd->add_option("--delta", opts->delta, "Failure probability")->required();
    cmd->add_option("--kind", opts->kind, "Which estimate the guarantee covers")
        ->check(CLI::IsMember({"distance", "kernel"}))
        ->required();
    cmd->callback([opts]() {
        const auto kind =
            opts->kind == "distance" ? grnf::DimKind::distance : grnf::DimKind::kernel;
        std::cout << grnf::embedding_dim_for(opts->epsilon, opts->delta, kind) << "\n";
    });
}

void setup_distance(CLI::App& app) {
    struct Opts {
        std::string map, g1, g2;
    };
    auto opts = std::make_shared<Opts>();
    CLI::App* cmd = app.add_subcommand("distance", "Estimated metric distance between two graphs");
    cmd->add_option("--map", opts->map, "Map JSON produced by embed --save-map")->required();
    cmd->add_option("--g1", opts->g1, "First graph JSON")->required();
    cmd->add_option("--g2", opts->g2, "Second graph JSON")->required();
    cmd->callback([opts]() {
        const grnf::GrnfMap map = grnf::load_map(opts->map);
        const auto z1 = grnf::embed(map, grnf::load_graph(opts->g1));
        const auto z2 = grnf::embed(map, grnf::load_graph(opts->g2));
        std::cout << grnf::detail::format_double(grnf::distance_estimate(z1, z2).value) << "\n";
    });
}

void setup_gram(CLI::App& app) {
    struct Opts {
        std::string map, input, out;
    };
    auto opts = std::make_shared<Opts>();
    CLI::App* cmd = app.add_subcommand("gram", "Kernel Gram matrix of a corpus");
    cmd->add_option("--map", opts->map, "Map JSON produced by embed --save-map")->required();
    cmd->add_option("--input", opts->input, "Corpus")->required();
    cmd->add_option("--out", opts->out, "Output CSV: index,g0,...,g{n-1}")->required();
    cmd->callback([opts]() {
        const grnf::GrnfMap map = grnf::load_map(opts->map);
        const grnf::Corpus corpus = grnf::load_corpus(opts->input);
        const grnf::GramMatrix gram = grnf::gram_matrix(map, corpus.graphs);
        std::string csv = "index";
        for (int j = 0; j < gram.size; ++j) csv += ",g" + std::to_string(j);
        csv += '\n';
        for (int i = 0; i < gram.size; ++i) {
            csv += std::to_string(i);
            for (int j = 0; j < gram.size; ++j) {
                csv += ',';
                csv += grnf::detail::format_double(gram.at(i, j));
            }
            csv += '\n';
        }
        write_file(opts->out, csv);
    });
}

void setup_experiment_convergence(CLI::App* experiment) {
    struct Opts {
        std::string g1, g2, out;
        std::vector<int> mgrid;
        int ref_m = 100000;
        int trials = 500;
        std::uint64_t seed = 0;
        int threads = 1;
    };
    auto opts = std::make_shared<Opts>();
    auto dist = std::make_shared<DistributionFlags>();
    CLI::App* cmd = experiment->add_subcommand(
        "convergence", "Monte-Carlo check of the distance-concentration bounds");
    cmd->add_option("--g1", opts->g1, "First graph JSON")->required();
    cmd->add_option("--g2", opts->g2, "Second graph JSON")->required();
    cmd->add_option("--mgrid", opts->mgrid, "Comma-separated feature counts")
        ->delimiter(',')
        ->required();
    cmd->add_option("--ref-m", opts->ref_m, "Reference map width treated as ground truth")
        ->capture_default_str();
    cmd->add_option("--trials", opts->trials, "Map pairs per grid entry")->capture_default_str();
    cmd->add_option("--seed", opts->seed, "Base seed")->capture_default_str();
    add_distribution_flags(cmd, dist);
    cmd->add_option("--threads", opts->threads, "Worker threads (output is thread-independent)")
        ->capture_default_str();
    cmd->add_option("--out", opts->out, "Output CSV")->required();
    cmd->callback([opts, dist]() {
        const grnf::Graph g1 = grnf::load_graph(opts->g1);
        const grnf::Graph g2 = grnf::load_graph(opts->g2);
        const auto rows =
            grnf::convergence_diagnostics(g1, g2, opts->mgrid, opts->ref_m, opts->trials,
                                          opts->seed, dist->to_config(), opts->threads);
        write_file(opts->out, grnf::convergence_csv(rows));
    });
}

void setup_experiment_accuracy(CLI::App* experiment) {
    struct Opts {
        std::string input, out;
        std::vector<int> mgrid;
        int reps = 10;
        std::string classifier = "knn";
        int knn_k = 5;
        double ridge_lambda = 1e-3;
        double split = 0.8;
        int ref_m = 10000;
        int ref_reps = 3;
        std::uint64_t seed = 0;
        int threads = 1;
    };
    auto opts = std::make_shared<Opts>();
    auto dist = std::make_shared<DistributionFlags>();
    CLI::App* cmd = experiment->add_subcommand(
        "accuracy", "Classification accuracy as a function of embedding width");
    cmd->add_option("--input", opts->input, "Labelled corpus")->required();
    cmd->add_option("--mgrid", opts->mgrid, "Comma-separated feature counts")
        ->delimiter(',')
        ->required();
    cmd->add_option("--reps", opts->reps, "Fresh maps per grid entry")->capture_default_str();
    cmd->add_option("--classifier", opts->classifier,
                    "knn, or ridge: a closed-form linear readout standing in for an SVM head")
        ->check(CLI::IsMember({"knn", "ridge"}))
        ->capture_default_str();
    cmd->add_option("--knn-k", opts->knn_k, "Neighbours for knn")->capture_default_str();
    cmd->add_option("--ridge-lambda", opts->ridge_lambda, "Ridge regularization strength")
        ->capture_default_str();
    cmd->add_option("--split", opts->split, "Train fraction")->capture_default_str();
    cmd->add_option("--ref-m", opts->ref_m, "Reference map width")->capture_default_str();
    cmd->add_option("--ref-reps", opts->ref_reps, "Repetitions at the reference width (0 = none)")
        ->capture_default_str();
    cmd->add_option("--seed", opts->seed, "Base seed")->capture_default_str();
    add_distribution_flags(cmd, dist);
    cmd->add_option("--threads", opts->threads, "Worker threads (output is thread-independent)")
        ->capture_default_str();
    cmd->add_option("--out", opts->out, "Output CSV")->required();
    cmd->callback([opts, dist]() {
        const grnf::Corpus corpus = grnf::load_corpus(opts->input);
        grnf::ExperimentConfig config;
        config.m_grid = opts->mgrid;
        config.repetitions = opts->reps;
        config.train_fraction = opts->split;
        config.classifier.kind = opts->classifier;
        config.classifier.knn_k = opts->knn_k;
        config.classifier.ridge_lambda = opts->ridge_lambda;
        config.reference_M = opts->ref_m;
        config.reference_repetitions = opts->ref_reps;
        config.distribution = dist->to_config();
        config.seed = opts->seed;
        config.threads = opts->threads;
        write_file(opts->out, grnf::accuracy_csv(grnf::run_accuracy_vs_M(corpus, config)));
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "grnf: random feature maps embedding attributed graphs into vectors whose distances "
        "and inner products estimate a graph metric and kernel"};
    app.require_subcommand(1);

    CLI::App* gen = app.add_subcommand("gen", "Synthetic graph corpora");
    gen->require_subcommand(1);
    setup_gen_sbm(gen);
    setup_gen_delaunay(gen);
    setup_embed(app);
    setup_dim(app);
    setup_distance(app);
    setup_gram(app);
    CLI::App* experiment = app.add_subcommand("experiment", "Reproducible experiment runners");
    experiment->require_subcommand(1);
    setup_experiment_convergence(experiment);
    setup_experiment_accuracy(experiment);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const grnf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
