#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grnf/features.hpp"
#include "grnf/graph.hpp"

namespace grnf {

// Monte-Carlo distance estimate between two embedded graphs.
struct DistanceEstimate {
    double value = 0.0;    // sqrt(squared)
    double squared = 0.0;  // ||z1 - z2||^2, the unbiased estimator target
    int M = 0;
};

DistanceEstimate distance_estimate(const std::vector<double>& z1, const std::vector<double>& z2);

// Inner product of centered embeddings: the kernel estimate.
double kernel_estimate(const std::vector<double>& zc1, const std::vector<double>& zc2);

// Symmetric matrix of kernel estimates over a graph list (row-major).
struct GramMatrix {
    int size = 0;
    std::vector<double> values;  // size*size, values[i*size+j] == values[j*size+i]

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(size) +
                      static_cast<std::size_t>(j)];
    }
};

GramMatrix gram_matrix(const GrnfMap& map, const std::vector<Graph>& graphs);

// Standard-normal CDF, accurate to well below 1e-12 (erfc-based).
double normal_cdf(double x);

// Smallest eigenvalue of a symmetric matrix (row-major n*n) via cyclic Jacobi
// rotations; used for positive-semidefiniteness checks on Gram matrices.
double min_eigenvalue(const std::vector<double>& symmetric, int n);

// Embedding dimension achieving accuracy epsilon with failure probability
// delta: ceil(16 / (delta * epsilon^2)) for distances, ceil(1 / (delta *
// epsilon^2)) for kernels. Values within 1e-6 relative of an integer round to
// it instead of ceiling past it.
enum class DimKind { distance, kernel };
std::int64_t embedding_dim_for(double epsilon, double delta, DimKind kind);

// The three a-priori/asymptotic failure-probability bounds at dimension M and
// accuracy epsilon, each clamped to [0,1]:
//   delta_M    = 128 / (M eps^2)   (two independent maps compared)
//   delta_star = 16 / (M eps^2)    (one map against the exact value)
//   delta_clt  = 2 Phi(-sqrt(M) eps / sigma_hat), needing sigma_hat > 0.
struct DeltaBounds {
    double delta_M = 1.0;
    double delta_star = 1.0;
    std::optional<double> delta_clt;
};

DeltaBounds delta_bounds(int M, double epsilon, std::optional<double> sigma_hat = std::nullopt);

// One diagnostics row per embedding dimension.
struct ConvergenceRow {
    int M = 0;
    double delta_hat_M = 0.0;    // freq of |Delta(W1)-Delta(W2)| >= eps
    double delta_M = 1.0;
    double delta_hat_star = 0.0;  // freq of |Delta(W1)-Delta_star| >= eps
    double delta_star = 1.0;
    double delta_clt = 1.0;
    double epsilon = 0.0;
};

// Monte-Carlo verification table for the distance-concentration bounds. A
// reference map of dimension reference_M supplies Delta_star (treated as the
// true squared distance), epsilon = 25% of it, and the per-feature sigma_hat
// for the CLT bound. Each (M, trial) cell builds two maps with seeds
// hash(seed, M, trial, 1|2), so any thread count produces identical rows.
std::vector<ConvergenceRow> convergence_diagnostics(const Graph& g1, const Graph& g2,
                                                    const std::vector<int>& M_grid,
                                                    int reference_M, int trials,
                                                    std::uint64_t seed,
                                                    const DistributionConfig& config,
                                                    int threads = 1);

// CSV with header M,delta_hat_M,delta_M,delta_hat_star,delta_star,delta_clt,epsilon.
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace grnf
