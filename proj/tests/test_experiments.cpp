#include <doctest.h>

#include <vector>

#include "grnf/errors.hpp"
#include "grnf/experiments.hpp"
#include "grnf/graph_io.hpp"

using namespace grnf;

namespace {

// Trivially separable pair (edge densities 0.2 versus 0.8) for threshold
// checks that must hold at any seed.
Corpus easy_corpus(int per_class) {
    Corpus corpus;
    SbmParams sparse;
    sparse.p_in = 0.2;
    for (Graph& g : sbm_generate(sparse, per_class, 101)) {
        corpus.graphs.push_back(std::move(g));
        corpus.labels.push_back(0);
    }
    SbmParams dense;
    dense.p_in = 0.8;
    for (Graph& g : sbm_generate(dense, per_class, 202)) {
        corpus.graphs.push_back(std::move(g));
        corpus.labels.push_back(1);
    }
    return corpus;
}

// Density-matched pair (flat 0.4 versus communities 0.8/0.1) where narrow
// maps stay noisy, for the scatter-versus-width regression.
Corpus hard_corpus(int per_class) {
    Corpus corpus;
    SbmParams flat;  // single block of 12, p 0.4
    for (Graph& g : sbm_generate(flat, per_class, 101)) {
        corpus.graphs.push_back(std::move(g));
        corpus.labels.push_back(0);
    }
    SbmParams blocks;
    blocks.communities = {6, 6};
    blocks.p_in = 0.8;
    blocks.p_out = 0.1;
    for (Graph& g : sbm_generate(blocks, per_class, 202)) {
        corpus.graphs.push_back(std::move(g));
        corpus.labels.push_back(1);
    }
    return corpus;
}

ExperimentConfig base_config() {
    ExperimentConfig config;
    config.m_grid = {4, 64};
    config.repetitions = 3;
    config.reference_repetitions = 0;
    config.seed = 7;
    return config;
}

}  // namespace

TEST_CASE("accuracy sweep: shape, determinism, thread independence") {
    const Corpus corpus = easy_corpus(30);
    ExperimentConfig config = base_config();
    const auto rows = run_accuracy_vs_M(corpus, config);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].M == 4);
    CHECK(rows[1].M == 64);
    for (const auto& row : rows) {
        CHECK(!row.is_reference);
        CHECK(row.mean_accuracy >= 0.0);
        CHECK(row.mean_accuracy <= 1.0);
        CHECK(row.std_accuracy >= 0.0);
    }

    CHECK(rows[1].mean_accuracy > 0.9);  // density pair separates almost perfectly

    CHECK(accuracy_csv(run_accuracy_vs_M(corpus, config)) == accuracy_csv(rows));
    ExperimentConfig threaded = config;
    threaded.threads = 3;
    CHECK(accuracy_csv(run_accuracy_vs_M(corpus, threaded)) == accuracy_csv(rows));

    const std::string csv = accuracy_csv(rows);
    CHECK(csv.rfind("M,mean_accuracy,std_accuracy,is_reference\n", 0) == 0);
}

TEST_CASE("accuracy sweep: repetition scatter shrinks as maps widen") {
    const Corpus corpus = hard_corpus(30);
    ExperimentConfig config = base_config();
    config.m_grid = {4, 128};
    config.repetitions = 10;
    const auto rows = run_accuracy_vs_M(corpus, config);
    CHECK(rows[1].std_accuracy <= rows[0].std_accuracy);
}

TEST_CASE("accuracy sweep: reference rows and ridge classifier") {
    const Corpus corpus = easy_corpus(20);
    ExperimentConfig config = base_config();
    config.m_grid = {16};
    config.reference_M = 128;
    config.reference_repetitions = 2;
    const auto rows = run_accuracy_vs_M(corpus, config);
    REQUIRE(rows.size() == 2);
    CHECK(!rows[0].is_reference);
    CHECK(rows[1].is_reference);
    CHECK(rows[1].M == 128);

    ExperimentConfig ridge = base_config();
    ridge.m_grid = {64};
    ridge.classifier.kind = "ridge";
    ridge.classifier.ridge_lambda = 1e-3;
    const auto ridge_rows = run_accuracy_vs_M(corpus, ridge);
    CHECK(ridge_rows[0].mean_accuracy > 0.9);
}

TEST_CASE("accuracy sweep: degenerate single-feature grid still runs") {
    const Corpus corpus = easy_corpus(10);
    ExperimentConfig config = base_config();
    config.m_grid = {1};
    config.repetitions = 2;
    const auto rows = run_accuracy_vs_M(corpus, config);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_accuracy >= 0.0);
    CHECK(rows[0].mean_accuracy <= 1.0);
}

TEST_CASE("accuracy sweep: configuration validation") {
    const Corpus corpus = easy_corpus(5);
    ExperimentConfig config = base_config();
    config.m_grid = {};
    CHECK_THROWS_AS(run_accuracy_vs_M(corpus, config), ValidationError);
    config = base_config();
    config.m_grid = {0};
    CHECK_THROWS_AS(run_accuracy_vs_M(corpus, config), ValidationError);
    config = base_config();
    config.repetitions = 0;
    CHECK_THROWS_AS(run_accuracy_vs_M(corpus, config), ValidationError);
    config = base_config();
    config.train_fraction = 1.0;
    CHECK_THROWS_AS(run_accuracy_vs_M(corpus, config), ValidationError);
    config = base_config();
    config.classifier.kind = "svm";
    CHECK_THROWS_AS(run_accuracy_vs_M(corpus, config), ValidationError);
    config = base_config();
    config.reference_repetitions = 1;
    config.reference_M = 0;
    CHECK_THROWS_AS(run_accuracy_vs_M(corpus, config), ValidationError);

    Corpus tiny = easy_corpus(1);  // 2 graphs: split 0.8 leaves train=1, test=1
    CHECK_NOTHROW(run_accuracy_vs_M(tiny, base_config()));
    Corpus single;
    single.graphs.push_back(Graph::null());
    single.labels.push_back(0);
    CHECK_THROWS_AS(run_accuracy_vs_M(single, base_config()), ValidationError);
}
