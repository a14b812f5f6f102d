#include "grnf/experiments.hpp"

#include <cmath>
#include <numeric>

#include "csv_detail.hpp"
#include "grnf/classify.hpp"
#include "grnf/errors.hpp"
#include "grnf/rng.hpp"
#include "parallel_detail.hpp"

namespace grnf {

namespace {

struct Cell {
    int M = 0;
    int rep = 0;
    bool is_reference = false;
};

double cell_accuracy(const Corpus& corpus, const ExperimentConfig& config,
                     const std::vector<std::size_t>& train_idx,
                     const std::vector<std::size_t>& test_idx, const Cell& cell) {
    const GrnfMap map =
        build_grnf(cell.M, config.distribution,
                   derive_seed(config.seed, static_cast<std::uint64_t>(cell.M),
                               static_cast<std::uint64_t>(cell.rep)));
    std::vector<std::vector<double>> train, test;
    std::vector<int> train_labels, test_labels;
    train.reserve(train_idx.size());
    test.reserve(test_idx.size());
    for (std::size_t i : train_idx) {
        train.push_back(embed(map, corpus.graphs[i]));
        train_labels.push_back(corpus.labels[i]);
    }
    for (std::size_t i : test_idx) {
        test.push_back(embed(map, corpus.graphs[i]));
        test_labels.push_back(corpus.labels[i]);
    }
    std::vector<int> predicted;
    if (config.classifier.kind == "knn") {
        predicted = knn_classify(train, train_labels, test, config.classifier.knn_k);
    } else {
        const RidgeModel model = ridge_readout(train, train_labels, config.classifier.ridge_lambda);
        predicted = ridge_predict(model, test);
    }
    return classification_accuracy(predicted, test_labels);
}

}  // namespace

std::vector<AccuracyRow> run_accuracy_vs_M(const Corpus& corpus, const ExperimentConfig& config) {
    if (config.m_grid.empty()) throw ValidationError("experiment: M grid is empty");
    for (int m : config.m_grid) {
        if (m < 1) throw ValidationError("experiment: M values must be at least 1");
    }
    if (config.repetitions < 1) throw ValidationError("experiment: repetitions must be at least 1");
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw ValidationError("experiment: train fraction must lie strictly between 0 and 1");
    }
    if (config.classifier.kind != "knn" && config.classifier.kind != "ridge") {
        throw ValidationError("experiment: classifier must be 'knn' or 'ridge'");
    }
    if (config.reference_repetitions < 0 || (config.reference_repetitions > 0 && config.reference_M < 1)) {
        throw ValidationError("experiment: invalid reference settings");
    }
    validate_config(config.distribution);
    const std::size_t n = corpus.size();
    const auto n_train = static_cast<std::size_t>(
        std::floor(config.train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n) {
        throw ValidationError("experiment: split leaves an empty train or test set");
    }

    // One split for the whole sweep, so repetition scatter reflects map
    // randomness alone.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    RandomStream split_stream(derive_seed(config.seed, std::uint64_t{0}));
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = split_stream.raw() % (i + 1);
        std::swap(order[i], order[j]);
    }
    const std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    const std::vector<std::size_t> test_idx(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

    std::vector<Cell> cells;
    for (int m : config.m_grid) {
        for (int rep = 0; rep < config.repetitions; ++rep) cells.push_back({m, rep, false});
    }
    for (int rep = 0; rep < config.reference_repetitions; ++rep) {
        cells.push_back({config.reference_M, rep, true});
    }

    std::vector<double> acc(cells.size(), 0.0);
    detail::parallel_for(cells.size(), config.threads, [&](std::size_t c) {
        acc[c] = cell_accuracy(corpus, config, train_idx, test_idx, cells[c]);
    });

    std::vector<AccuracyRow> rows;
    std::size_t offset = 0;
    auto aggregate = [&](int m, int reps, bool is_reference) {
        AccuracyRow row;
        row.M = m;
        row.is_reference = is_reference;
        double mean = 0.0;
        for (int r = 0; r < reps; ++r) mean += acc[offset + static_cast<std::size_t>(r)];
        mean /= static_cast<double>(reps);
        row.mean_accuracy = mean;
        if (reps > 1) {
            double ss = 0.0;
            for (int r = 0; r < reps; ++r) {
                const double d = acc[offset + static_cast<std::size_t>(r)] - mean;
                ss += d * d;
            }
            row.std_accuracy = std::sqrt(ss / static_cast<double>(reps - 1));
        }
        offset += static_cast<std::size_t>(reps);
        rows.push_back(row);
    };
    for (int m : config.m_grid) aggregate(m, config.repetitions, false);
    if (config.reference_repetitions > 0) {
        aggregate(config.reference_M, config.reference_repetitions, true);
    }
    return rows;
}

std::string accuracy_csv(const std::vector<AccuracyRow>& rows) {
    std::string out = "M,mean_accuracy,std_accuracy,is_reference\n";
    for (const AccuracyRow& row : rows) {
        out += std::to_string(row.M);
        out += ',';
        out += detail::format_double(row.mean_accuracy);
        out += ',';
        out += detail::format_double(row.std_accuracy);
        out += ',';
        out += row.is_reference ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace grnf
