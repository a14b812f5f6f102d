#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grnf/features.hpp"
#include "grnf/graph_io.hpp"

namespace grnf {

struct ClassifierSpec {
    std::string kind = "knn";  // "knn" or "ridge"
    int knn_k = 5;
    double ridge_lambda = 1e-3;
};

// Accuracy-versus-embedding-width sweep. One train/test split is drawn per
// experiment; each (M, repetition) cell builds a fresh map from
// hash(seed, M, repetition), so cells are independent of evaluation order
// and of the thread count.
struct ExperimentConfig {
    std::vector<int> m_grid;
    int repetitions = 10;
    double train_fraction = 0.8;
    ClassifierSpec classifier;
    int reference_M = 10000;          // wide-map baseline the sweep converges to
    int reference_repetitions = 3;    // 0 disables the reference rows
    DistributionConfig distribution;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct AccuracyRow {
    int M = 0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // sample std over repetitions, 0 for a single rep
    bool is_reference = false;
};

// Rows in grid order, reference row (if enabled) last.
std::vector<AccuracyRow> run_accuracy_vs_M(const Corpus& corpus, const ExperimentConfig& config);

// Header: M,mean_accuracy,std_accuracy,is_reference
std::string accuracy_csv(const std::vector<AccuracyRow>& rows);

}  // namespace grnf
